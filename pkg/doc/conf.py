# -*- coding: utf-8 -*-
#
# wheezy.erasure documentation build configuration file.

import os
import sys

sys.path.extend([
    os.path.abspath(os.path.join('..', 'src'))
])

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc', 'sphinx.ext.doctest',
    'sphinx.ext.coverage', 'sphinx.ext.viewcode',
    'sphinx_rtd_theme'
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'wheezy.erasure'
copyright = '2026, Andriy Kornatskyy'
version = 'latest'
release = 'latest'

exclude_patterns = ['_build']

autodoc_member_order = 'bysource'

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_show_sphinx = False
html_show_copyright = False
htmlhelp_basename = 'wheezy.erasuredoc'

# -- Options for LaTeX and manual page output --------------------------------

latex_documents = [
    ('index', 'wheezy.erasure.tex', 'wheezy.erasure documentation',
     'Andriy Kornatskyy', 'manual'),
]

man_pages = [
    ('index', 'wheezy.erasure', 'wheezy.erasure documentation',
     ['Andriy Kornatskyy'], 1)
]
