"""JSON persistence for tables, complexes and partial cubes."""
import json
import logging
from pathlib import Path
from typing import Any, Type, TypeVar

from pydantic import BaseModel, ValidationError

from .complex import NotOrientable, orient
from .errors import PreconditionError, SereneError, TableError
from .models import OperationTable, OrientedComplex, PartialCube, SimpComplex

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class StorageError(SereneError):
    """Base exception for storage operations."""
    pass


def read_json(path: Path) -> Any:
    """Parse a JSON file."""
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise StorageError(f"Failed to read {path}: {e}")
    except OSError as e:
        raise StorageError(f"Failed to open {path}: {e}")


def write_text_atomic(path: Path, text: str) -> None:
    """Write through a sibling temp file, then move it onto the target."""
    path = Path(path)
    try:
        temp_file = path.with_suffix(path.suffix + ".tmp")
        temp_file.write_text(text)
        temp_file.replace(path)
    except OSError as e:
        raise StorageError(f"Failed to write {path}: {e}")
    logger.debug("wrote %s", path)


def dump_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json"), indent=2, sort_keys=True)


def _validate(path: Path, model: Type[ModelT], data: Any) -> ModelT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise TableError(f"Invalid {model.__name__} in {path}: {e}") from e


def _load(path: Path, model: Type[ModelT]) -> ModelT:
    return _validate(path, model, read_json(path))


def load_table(path: Path) -> OperationTable:
    return _load(path, OperationTable)


def load_complex(path: Path) -> SimpComplex:
    return _load(path, SimpComplex)


def load_partial(path: Path) -> PartialCube:
    return _load(path, PartialCube)


def load_oriented(path: Path) -> OrientedComplex:
    """Oriented complex JSON, a complex with an ``orientation`` array, or a
    plain complex oriented by propagation."""
    data = read_json(path)
    if isinstance(data, dict) and "base" in data:
        return _validate(path, OrientedComplex, data)
    if isinstance(data, dict) and "orientation" in data:
        data = dict(data)
        signs = data.pop("orientation")
        base = _validate(path, SimpComplex, data)
        return _validate(
            path, OrientedComplex, {"base": base, "orientation": signs}
        )
    result = orient(_validate(path, SimpComplex, data))
    if isinstance(result, NotOrientable):
        raise PreconditionError(
            f"{path} is not orientable (conflict across ridge {result.ridge})"
        )
    return result
