"""
File helpers
"""
import os
import tempfile
from pathlib import Path
from typing import Union

from turnkan.utils.exceptions import DataIOError


def atomic_write_bytes(path: Union[str, Path], content: bytes) -> Path:
    """
    Write bytes so readers never observe a partially written file

    Args:
        path: Destination file
        content: Full file content

    Returns:
        The destination path

    Raises:
        DataIOError: If the directory cannot be created or written
    """
    path = Path(path)
    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
        with os.fdopen(fd, "wb") as handle:
            handle.write(content)
        os.replace(tmp_name, path)
    except OSError as e:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise DataIOError(f"Cannot write {path}: {e}") from e
    return path


def atomic_write_text(path: Union[str, Path], content: str) -> Path:
    return atomic_write_bytes(path, content.encode("utf-8"))
