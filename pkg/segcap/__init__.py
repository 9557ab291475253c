__version__ = '0.1.0'


def list_available():
    """Names of the segcap sub-commands."""
    from segcap.cli.commands import COMMANDS
    return sorted(COMMANDS)
