import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

logger = logging.getLogger(__name__)


def to_json_text(record: Any) -> str:
    """
    Render a record as deterministic JSON: sorted keys, two-space indentation, trailing newline.
    """
    return json.dumps(record, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def write_json(path: Union[str, Path], record: Any) -> Path:
    """
    Write a JSON record to a file, creating parent folders as needed.

    Args:
        path (Union[str, Path]): Destination file
        record (Any): JSON-serializable record

    Returns:
        Path: The file that was written

    Example:
        write_json("out/cycle.json", {"dim": 1, "weights": {"12": "1"}})
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(to_json_text(record))
    logger.debug(f"wrote {path}")
    return path


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a JSON file.

    Args:
        path (Union[str, Path]): File to read

    Returns:
        Dict[str, Any]: Parsed content
    """
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
