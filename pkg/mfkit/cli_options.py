import functools

import click

from .fields import FieldError, parse_field


def verbosity_option(func):
    @click.option(
        "-v",
        "--verbose",
        count=True,
        help="Verbosity level, counting, maximum level: 3 (use: -v, -vv, -vvv)",
    )
    @functools.wraps(func)
    def decorator(*args, **kwargs):
        return func(*args, **kwargs)

    return decorator


def output_option(func):
    @click.option(
        "-o",
        "--out",
        "out",
        type=click.File("w"),
        default="-",
        show_default=True,
        help="Write the JSON document here, '-' is standard output.",
    )
    @functools.wraps(func)
    def decorator(*args, **kwargs):
        return func(*args, **kwargs)

    return decorator


def _convert_field(_ctx, param, value):
    if value is None:
        return None
    try:
        return parse_field(value)
    except FieldError as e:
        raise click.BadParameter(str(e), param=param) from e


def field_option(default=None):
    def wrapper(func):
        @click.option(
            "--field",
            callback=_convert_field,
            default=default,
            show_default=default is not None,
            help="Coefficient field: Q or Fp:<p>.",
        )
        @functools.wraps(func)
        def decorator(*args, **kwargs):
            return func(*args, **kwargs)

        return decorator

    return wrapper
