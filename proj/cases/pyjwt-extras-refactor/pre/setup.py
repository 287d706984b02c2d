from setuptools import setup

setup(
    name='authkit',
    install_requires=[
        'pyjwt>=2.0',
        'cryptography>=41',
    ],
)
