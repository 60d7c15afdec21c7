from .module import mfkit_register_catalog_families as mfkit_register_catalog_families
