from mfkit.catalog import CatalogEntry, CatalogFamily, CatalogParameter
from mfkit.fields import QQ
from mfkit.models import StrengthDecomposition
from mfkit.plugins import hookimpl
from mfkit.poly import PolynomialRing


def _square_sum(n: int) -> CatalogEntry:
    z = PolynomialRing(QQ, n + 1).variables()
    decomposition = StrengthDecomposition.create(z, z)
    return CatalogEntry(
        name="square-sum", f=decomposition.f, decomposition=decomposition, provenance="plugin"
    )


@hookimpl
def mfkit_register_catalog_families():
    return [CatalogFamily("square-sum", (CatalogParameter("n", int),), _square_sum)]
