# -*- coding: utf-8 -*-
from setuptools import setup

packages = \
['uebk']

package_data = \
{'': ['*']}

install_requires = \
['numpy>=1.23.4',
 'scipy>=1.9',
 'typer>=0.9']

entry_points = \
{'console_scripts': ['uebk = uebk.cli:app']}

setup_kwargs = {
    'name': 'uebk',
    'version': '0.1.0',
    'description': 'Construct and verify unextendible entangled bases with fixed Schmidt number.',
    'long_description': None,
    'author': 'mcdelaney',
    'author_email': 'mcdelaney@gmail.com',
    'maintainer': None,
    'maintainer_email': None,
    'url': None,
    'packages': packages,
    'package_data': package_data,
    'install_requires': install_requires,
    'entry_points': entry_points,
    'python_requires': '>=3.9',
}

setup(**setup_kwargs)
