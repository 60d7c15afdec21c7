from mfkit.catalog import CatalogEntry, CatalogFamily
from mfkit.fields import QQ
from mfkit.models import StrengthDecomposition
from mfkit.plugins import hookimpl
from mfkit.poly import PolynomialRing


def _binary_product() -> CatalogEntry:
    z0, z1 = PolynomialRing(QQ, 2).variables()
    decomposition = StrengthDecomposition.create([z0], [z1])
    return CatalogEntry(
        name="binary-product", f=decomposition.f, decomposition=decomposition, provenance="plugin"
    )


@hookimpl
def mfkit_register_catalog_families():
    return [CatalogFamily("binary-product", (), _binary_product)]
