#  Copyright © 2021 The Segcap Authors. All Rights Reserved.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#  ==============================================================================
"""
segcap console entry point.

    segcap bounds --ell=8 --p=0.1 --q=0.05 --optimize_alpha
    segcap capacity --ell=6 --p=0.2 --tol=1e-7
    segcap figures --fig=1,2 --out=figures/
"""
import os
import sys
import time

from absl import app, flags, logging

from segcap.cli.commands import COMMANDS
from segcap.utils.converter import ReportWriter

FLAGS = flags.FLAGS

EXIT_USAGE = 2


def normalize_argv(argv):
    """--max-enum-ell=20 -> --max_enum_ell=20; values are left alone."""
    normalized = []
    for arg in argv:
        if arg.startswith('--') and len(arg) > 2:
            name, sep, value = arg[2:].partition('=')
            arg = '--' + name.replace('-', '_') + sep + value
        normalized.append(arg)
    return normalized


def parse_flags(argv):
    try:
        return FLAGS(argv)
    except flags.Error as e:
        sys.stderr.write('FATAL Flags parsing error: {}\n'.format(e))
        sys.stderr.write('Pass --helpshort or --helpfull to see help on flags.\n')
        sys.exit(EXIT_USAGE)


def write_reports(reports, fmt, out):
    for report in reports:
        if report.name is None:
            ReportWriter(report.columns, fmt=fmt)(report.frame, out_file=out)
        else:
            out_dir = out or '.'
            os.makedirs(out_dir, exist_ok=True)
            out_file = os.path.join(out_dir, '{}.{}'.format(report.name, fmt))
            ReportWriter(report.columns, fmt=fmt)(report.frame, out_file=out_file)


def main(argv):
    if len(argv) != 2 or argv[1] not in COMMANDS:
        raise app.UsageError('Usage: segcap <{}> [--flags]; got {!r}.'.format('|'.join(COMMANDS), ' '.join(argv[1:])),
                             exitcode=EXIT_USAGE)
    start_time = time.time()
    try:
        code, reports = COMMANDS[argv[1]](FLAGS)
        write_reports(reports, FLAGS.format, FLAGS.out)
    except ValueError as e:
        logging.error('%s', e)
        return EXIT_USAGE
    logging.info("--- %s seconds ---" % (time.time() - start_time))
    return code


def run():
    app.run(main, argv=normalize_argv(sys.argv), flags_parser=parse_flags)


if __name__ == '__main__':
    run()
