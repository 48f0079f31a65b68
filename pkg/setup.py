# Copyright (c) The zk-strip authors.
# All rights reserved.
#
# This source code is licensed under the terms described in the LICENSE file in
# the root directory of this source tree.

from setuptools import find_packages, setup


# Function to read the requirements.txt file
def read_requirements():
    with open("requirements.txt") as req:
        content = req.readlines()
    return [line.strip() for line in content if line.strip() and not line.startswith("#")]


setup(
    name="zk_strip",
    version="0.1.0",
    author="The zk-strip authors",
    description="Pseudospectral generalized Zakharov-Kuznetsov solver on a strip with decay diagnostics",
    entry_points={
        "console_scripts": [
            "zk = zk_strip.cli.zk:main",
        ]
    },
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"zk_strip": ["distribution/templates/*.cfg", "distribution/templates/*.yaml"]},
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Operating System :: OS Independent",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.10",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest"]},
    include_package_data=True,
)
