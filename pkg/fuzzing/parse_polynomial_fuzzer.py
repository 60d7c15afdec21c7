#!/usr/bin/env python3
import logging
import sys

import atheris.import_hook
import atheris.instrument_bytecode
import structlog


def set_mfkit_log_level(level=logging.CRITICAL):
    logger = logging.getLogger("mfkit")

    def logger_factory():
        return logger

    structlog.configure(logger_factory=logger_factory)
    logger.setLevel(level)


with atheris.import_hook.instrument_imports(include=["mfkit"]):
    from mfkit.fields import PrimeField
    from mfkit.parser import PolynomialSyntaxError, parse_polynomial


F7 = PrimeField(7)


@atheris.instrument_bytecode.instrument_func
def test_parse_polynomial(data):
    text = atheris.FuzzedDataProvider(data).ConsumeUnicodeNoSurrogates(len(data))
    try:
        poly = parse_polynomial(text, field=F7)
    except PolynomialSyntaxError:
        return
    # canonical text parses back to the same polynomial
    assert parse_polynomial(str(poly), poly.ring) == poly


if __name__ == "__main__":
    set_mfkit_log_level()
    atheris.Setup(sys.argv, test_parse_polynomial)
    atheris.Fuzz()
