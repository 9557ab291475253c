import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="segcap",
    version="0.1.0",
    author="The Segcap Authors",
    description="Capacity bounds for segmented deletion/duplication channels, with Blahut-Arimoto, "
                "asymptotic expansions and a Monte Carlo simulator.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=("tests",)),
    install_requires=[
        'absl-py',
        'numpy',
        'scipy',
        'pandas',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['segcap=segcap.cli.main:run'],
    },
    classifiers=(
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
        'Intended Audience :: Education',
        'Intended Audience :: Science/Research',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Information Analysis',
        'Topic :: Scientific/Engineering :: Mathematics',
    ),
    license="Apache-2.0",
    keywords=['information theory', 'channel capacity', 'deletion channel', 'blahut-arimoto'],
    python_requires='>=3.8',
)
