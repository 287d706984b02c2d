from setuptools import setup, find_packages

setup(
    name='SoftLayer',
    version='6.2.6',
    packages=find_packages(exclude=['tests']),
    install_requires=[
        'prettytable',
        'click >= 8.0.4',
        'requests >= 2.32.2',
        'urllib3 >= 1.24',
        'rich==14.0.0',
    ],
)
