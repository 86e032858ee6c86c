#!/usr/bin/env python3
from setuptools import Command, setup, find_packages

import os
from typing import List

VERSION: str = '1.0'


class InitializeDefaultFilesCommand(Command):
    description = 'Create the mdtas log directory'
    user_options = []  # no options are needed

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        os.makedirs(os.path.join(os.path.expanduser('~'), '.config', 'mdtas', 'log'), exist_ok=True)


class InstallRequirements(Command):
    description = 'Install all requirements from requirements.txt for mdtas'
    user_options = []  # no options are needed

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        os.system('pip3 install -r ./requirements.txt --user')


def load_requirements() -> List[str]:
    '''
    Parses requirements from requirements.txt to eliminate duplicate listing of packages

    Parameters:
        None

    Returns:
        requirements (List[str]): The package list the mdtas module requires
    '''
    with open('./requirements.txt', 'r') as requirements_file:
        return [line for line in requirements_file.read().splitlines() if line.strip()]


setup(
    name="mdtas",
    version=VERSION,
    description="Metric distortion of alpha-threshold approval mechanisms: evaluation, lower-bound witnesses and worst-case search",
    license="MIT",
    keywords="social-choice metric-distortion approval-voting",
    packages=find_packages(exclude=['tests', 'tests.*']),
    entry_points={"console_scripts": ["mdtas=mdtas.__main__:main"]},
    install_requires=load_requirements(),
    extras_require={'test': ['pytest>=6.2']},
    python_requires='>=3.8',
    include_package_data=True,
    zip_safe=True,
    cmdclass={
        'requirements': InstallRequirements,
        'init_files': InitializeDefaultFilesCommand,
    }
)
