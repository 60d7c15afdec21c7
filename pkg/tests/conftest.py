from mfkit.testing import (  # noqa: F401 (module imported but unused)
    configure_logging,
)
