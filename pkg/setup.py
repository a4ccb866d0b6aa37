from setuptools import setup, find_packages

required = []

with open('requirements.txt') as f:
    required = f.read().splitlines()

setup(name='omnipred',
      version='0.1.0',
      description='Online and offline omniprediction via proper calibration and weak agnostic learning.',
      packages=find_packages(exclude=['tests']),
      install_requires=required,
      extras_require={'test': ['pytest>=6', 'hypothesis>=5']},
      entry_points={'console_scripts': ['omnipred = omnipred.cli:main']})
