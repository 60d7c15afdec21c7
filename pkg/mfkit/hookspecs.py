from typing import List

import pluggy

from mfkit.catalog import CatalogFamily

hookspec = pluggy.HookspecMarker("mfkit")


@hookspec
def mfkit_register_catalog_families() -> List[CatalogFamily]:
    """Register extra catalog families.

    :returns: The list of families to be registered
    """
    return []
