# pyright: reportUnusedExpression=false
# ruff: noqa: B018

import mfkit.plugins
from mfkit import cli, hookspecs
from mfkit.models import MatrixFactorization
from mfkit.parser import _TextToTerms
from mfkit.report import SearchReport

_TextToTerms.coefficient
_TextToTerms.factor
_TextToTerms.scaled_term
_TextToTerms.constant_term
_TextToTerms.unit_term
_TextToTerms.first_term
_TextToTerms.start

cli.cli.context_class
cli.main

hookspecs.mfkit_register_catalog_families
mfkit.plugins.hookimpl

MatrixFactorization.degree
SearchReport.exhaustive
