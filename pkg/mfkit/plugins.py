import importlib.util
import itertools
import sys
from pathlib import Path
from types import ModuleType
from typing import List, Optional, Tuple

import pluggy
from structlog import get_logger

from mfkit import hookspecs
from mfkit.catalog import CatalogFamily

# Entry point group of installable plugins. Bump the version on
# backward-incompatible hook changes.
SETUPTOOLS_ENTRYPOINT_NAME = "mfkit_v1"

logger = get_logger()

hookimpl = pluggy.HookimplMarker("mfkit")


class MfkitPluginManager(pluggy.PluginManager):
    def __init__(self):
        super().__init__("mfkit")
        self.add_hookspecs(hookspecs)

    def load_setuptools_entrypoints(
        self, group: str = SETUPTOOLS_ENTRYPOINT_NAME, name: Optional[str] = None
    ):
        return super().load_setuptools_entrypoints(group, name=name)

    def import_path(self, path: Path):
        """Load plugin modules from ``path``.

        ``path`` is either a single Python file, or a directory whose ``*.py``
        files and ``*/__init__.py`` packages are loaded.
        """
        logger.debug("Importing plugin modules", path=path)

        if path.is_file():
            to_import = [(path.stem, path)]
        elif path.is_dir():
            to_import = [(p.parent.name, p) for p in sorted(path.glob("*/__init__.py"))]
            to_import.extend((p.stem, p) for p in sorted(path.glob("*.py")))
        else:
            raise ValueError("Invalid plugin import path", path)

        for module in self._import_modules(to_import):
            self.register(module)

    @classmethod
    def _import_modules(cls, modules_to_import: List[Tuple[str, Path]]) -> List[ModuleType]:
        modules = []
        for module_name, path in modules_to_import:
            spec = importlib.util.spec_from_file_location(module_name, path)
            if not spec or not spec.loader:
                logger.error("Invalid plugin file", path=path)
                continue

            module = importlib.util.module_from_spec(spec)
            # Packages import their own submodules through sys.modules.
            sys.modules[module_name] = module
            spec.loader.exec_module(module)
            modules.append(module)
        logger.debug("Imported plugins", modules=[m.__name__ for m in modules])
        return modules

    def import_plugins(self, path: Optional[Path] = None):
        if path:
            self.import_path(path)

        self.load_setuptools_entrypoints()
        plugins = [name for name, _plugin in self.list_name_plugin()]
        if plugins:
            logger.info("Loaded plugins", plugins=plugins)

    def load_catalog_families_from_plugins(self) -> List[CatalogFamily]:
        families = list(
            itertools.chain(*self.hook.mfkit_register_catalog_families())  # type: ignore
        )
        if families:
            logger.debug("Loaded catalog families from plugins", families=[f.name for f in families])
        return families
