import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Union

SCHEMA_DIR = Path(__file__).resolve().parent
CIRCUIT_SCHEMA_PATH = SCHEMA_DIR / "circuit.schema.json"


def load_schema(path: Union[str, Path]) -> Dict[str, Any]:
    schema_path = Path(path)
    if not schema_path.exists():
        raise FileNotFoundError(f"Schema not found: {schema_path}")
    with schema_path.open() as f:
        return json.load(f)


@lru_cache(maxsize=1)
def circuit_schema() -> Dict[str, Any]:
    return load_schema(CIRCUIT_SCHEMA_PATH)
