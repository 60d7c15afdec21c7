from typing import Protocol

from rich import progress
from rich.console import Console
from rich.style import Style

from .models import ChunkResult


class ProgressReporter(Protocol):
    def __init__(self, total: int): ...

    def __enter__(self): ...

    def __exit__(self, _exc_type, _exc_value, _tb): ...

    def update(self, result: ChunkResult): ...


class NullProgressReporter:
    def __init__(self, total: int):
        pass

    def __enter__(self):
        pass

    def __exit__(self, _exc_type, _exc_value, _tb):
        pass

    def update(self, result: ChunkResult):
        pass


class RichConsoleProgressReporter:
    """Progress bar over the candidate index space, drawn on stderr."""

    def __init__(self, total: int):
        self._progress = progress.Progress(
            progress.TextColumn(
                "Search progress: {task.percentage:>3.0f}%",
                style=Style(color="#00FFC8"),
            ),
            progress.BarColumn(
                complete_style=Style(color="#00FFC8"), style=Style(color="#002060")
            ),
            progress.MofNCompleteColumn(),
            console=Console(stderr=True),
        )
        self._task = self._progress.add_task("Search progress:", total=total)

    def __enter__(self):
        self._progress.start()

    def __exit__(self, _exc_type, _exc_value, _tb):
        self._progress.remove_task(self._task)
        self._progress.stop()

    def update(self, result: ChunkResult):
        self._progress.update(self._task, advance=result.stop - result.start)
