import os

from setuptools import setup, find_packages

here = os.path.join(os.path.dirname(__file__))

with open(os.path.join(here, 'reqs', 'core.txt')) as f:
    REQUIREMENTS = f.read().splitlines()

with open(os.path.join(here, 'reqs', 'test.txt')) as f:
    TEST_REQUIREMENTS = f.read().splitlines()

setup(
    name='optimizely-sdk',
    version='5.2.0',
    packages=find_packages(exclude=['tests']),
    install_requires=REQUIREMENTS,
    tests_require=TEST_REQUIREMENTS,
)
