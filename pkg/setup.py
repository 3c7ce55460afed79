#!/usr/bin/python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

from bjia import __version__

setup(
    name='bjia',
    version=__version__,
    scripts=['bjia-cli'],
    packages=find_packages(exclude=["tests", "tests.*"]),

    description='Bitmap Join Index Advisor',
    long_description='''
bjia recommends bitmap join indexes for a star schema data warehouse. It
mines frequent closed sets of attributes from a workload of star-join
queries, turns them into candidate indexes and greedily keeps those that
lower the estimated I/O cost of the workload the most, optionally under a
storage budget.
''',
    license='MIT',
    keywords='data warehouse index selection',
    classifiers=[
        "Topic :: Database",
        "Environment :: Console",
        "Intended Audience :: Developers",
        "Natural Language :: English",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
    ],

    install_requires=[
        "numpy>=1.17",
        "pandas>=1.0",
        "sqlparse>=0.4",
    ],
    extras_require={
        "test": ["radish-bdd>=0.13"],
    },
)
