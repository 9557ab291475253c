# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('../../'))

import segcap
import sphinx_rtd_theme

version = segcap.__version__

# -- Project information -----------------------------------------------------

project = 'Segcap'
copyright = '2021, The Segcap Authors'
author = 'The Segcap Authors'
release = version

# -- General configuration ---------------------------------------------------

extensions = [
    'recommonmark',
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = ['.rst', '.md']
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

autodoc_default_options = {'special-members': '__call__, __len__'}

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'Segcapdoc'

source_parsers = {
    '.md': 'recommonmark.parser.CommonMarkParser',
}

# -- Options for LaTeX and manual page output --------------------------------

latex_documents = [
    (master_doc, 'Segcap.tex', 'Segcap Documentation', author, 'manual'),
]

man_pages = [
    (master_doc, 'segcap', 'Segcap Documentation', [author], 1)
]
