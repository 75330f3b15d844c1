# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.
#
# This file does only contain a selection of the most common options. For a
# full list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

from os.path import abspath, dirname, join, pardir
import sys

THIS_DIR = abspath(dirname(__file__))  # .../docs/source/
SOURCE_ROOT_DIR = abspath(join(THIS_DIR, pardir, pardir))  # .../
sys.path.insert(0, SOURCE_ROOT_DIR)

from syncrt.version import VERSION  # noqa: E402


# -- Project information -----------------------------------------------------

project = 'syncrt'
copyright = '2020-2026, the syncrt authors'
author = 'the syncrt authors'

# The short X.Y version
version = VERSION
# The full version, including alpha/beta/rc tags
release = VERSION


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.napoleon',
    'sphinx.ext.todo',
    'sphinx.ext.viewcode',
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

source_suffix = '.rst'

# The master toctree document.
master_doc = 'index'

language = "en"

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = []

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'


# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'  # pip install sphinx_rtd_theme

html_static_path = []


# -- Options for HTMLHelp output ---------------------------------------------

# Output file base name for HTML help builder.
htmlhelp_basename = 'syncrtdoc'


# -- Options for LaTeX output ------------------------------------------------

# (source start file, target name, title,
#  author, documentclass [howto, manual, or own class]).
latex_documents = [
    (master_doc, 'syncrt.tex', 'syncrt Documentation',
     author, 'manual'),
]


# -- Options for manual page output ------------------------------------------

# (source start file, name, description, authors, manual section).
man_pages = [
    (master_doc, 'syncrt', 'syncrt Documentation',
     [author], 1)
]


# -- Options for Epub output -------------------------------------------------

epub_title = project

# A list of files that should not be packed into the epub file.
epub_exclude_files = ['search.html']


# -- Extension configuration -------------------------------------------------

# If true, `todo` and `todoList` produce output, else they produce nothing.
todo_include_todos = True

# https://stackoverflow.com/questions/5599254
autoclass_content = 'both'
