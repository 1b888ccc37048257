"""
A setuptools based setup module.
See:
https://packaging.python.org/en/latest/distributing.html
https://github.com/pypa/sampleproject
"""

from setuptools import setup, find_packages

setup(
    name='dce',
    version='0.1.0',
    description='Mechanical response of corrugated plates to vacuum fluctuations',
    install_requires=['numpy', 'pandas', 'joblib', 'pyyaml', 'tqdm', 'scipy', 'sacred', 'pymongo'],
    packages=find_packages(exclude=['contrib', 'docs', 'tests', 'tests.*']),
    entry_points={'console_scripts': ['dce=dce.cli:main_entry']},
)
