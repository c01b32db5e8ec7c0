from setuptools import setup, find_packages

setup(
    name='smellfix',
    version='0.1.0',
    packages=find_packages(),
    include_package_data=True,
    package_data={
        'smellfix': ['data/*.yaml'],
        'smellfix.tests': ['fixtures/*', 'fixtures/*/*'],
    },
    install_requires=[
        'monty>=2023.9.25',
        'numpy>=1.21',
        'loguru>=0.7',
        'requests>=2.28',
        'tenacity>=8.2',
        'ruamel.yaml>=0.17',
    ],
    extras_require={
        'test': ['hypothesis>=6.80'],
    },
    entry_points={
        'console_scripts': ['smellfix=smellfix.cli:main'],
    },
)
