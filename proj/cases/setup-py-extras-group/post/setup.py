from setuptools import setup

setup(
    name='geodesy',
    version='0.9',
    install_requires=['pyproj>=3', 'shapely'],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
)
