"""File I/O for the command line: JSON matrices, channel/tensor/model files, CSV tables."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
import structlog

from src.channels.channel import GaussianChannel
from src.core.correlation import CorrelationMatrix
from src.core.errors import UsageError
from src.isotns.tensor import IsoTensor
from src.models.lattice import LatticeModel

logger = structlog.get_logger()


def read_json(path: Path) -> Dict[str, Any]:
    """
    Raises:
        UsageError: when the file is missing or not valid JSON
    """
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"input file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from e


def decode_matrix(value: Any) -> np.ndarray:
    """
    Matrix from {"n_modes", "rows"}, {"re", "im"} or a bare list of rows.

    Raises:
        UsageError: on a malformed matrix
    """
    try:
        if isinstance(value, dict) and "re" in value:
            re = np.array(value["re"], dtype=float)
            im = np.array(value.get("im", np.zeros_like(re)), dtype=float)
            matrix = re + 1j * im
        elif isinstance(value, dict):
            matrix = np.array(value["rows"], dtype=float)
            n_modes = value.get("n_modes")
            if n_modes is not None and matrix.shape[0] != int(n_modes):
                raise UsageError(f"matrix declares n_modes={n_modes} but has {matrix.shape[0]} rows")
        else:
            matrix = np.array(value, dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"malformed matrix: {e}") from e
    if matrix.ndim != 2:
        raise UsageError(f"expected a matrix, got shape {matrix.shape}")
    return matrix


def encode_matrix(matrix: np.ndarray) -> Dict[str, Any]:
    matrix = np.asarray(matrix)
    if np.iscomplexobj(matrix):
        return {"re": matrix.real.tolist(), "im": matrix.imag.tolist()}
    return {"n_modes": int(matrix.shape[0]), "rows": matrix.tolist()}


def load_channel(path: Path) -> Tuple[GaussianChannel, Optional[float]]:
    """
    {"A": matrix, "B": matrix, "spectral_radius": optional float}.

    The optional spectral radius is the value the file claims for the
    channel; checks that take r use it in place of the measured one.
    """
    payload = read_json(path)
    if "A" not in payload or "B" not in payload:
        raise UsageError(f"{path} must hold both 'A' and 'B'")
    A = decode_matrix(payload["A"])
    B = decode_matrix(payload["B"])
    if B.shape[0] != A.shape[0]:
        raise UsageError(f"{path}: A is {A.shape} but B is {B.shape}")
    declared = payload.get("spectral_radius")
    return GaussianChannel(A=A, B=B), None if declared is None else float(declared)


def load_correlation(path: Path) -> CorrelationMatrix:
    payload = read_json(path)
    return CorrelationMatrix(data=decode_matrix(payload.get("gamma", payload)))


def load_tensor(path: Path) -> IsoTensor:
    """{"legs": [{"name": "P", "modes": 2}, ...], "Lambda": matrix}"""
    payload = read_json(path)
    try:
        payload = dict(payload, Lambda=decode_matrix(payload["Lambda"]))
        return IsoTensor.from_dict(payload)
    except KeyError as e:
        raise UsageError(f"{path} is missing {e}") from e


def load_model(path: Path) -> LatticeModel:
    payload = read_json(path)
    try:
        blocks = [dict(entry, matrix=decode_matrix(entry["matrix"])) for entry in payload["blocks"]]
        return LatticeModel.from_dict({"orbitals": payload["orbitals"], "blocks": blocks})
    except KeyError as e:
        raise UsageError(f"{path} is missing {e}") from e


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


class ArtifactWriter:
    """
    Writes run artifacts into one directory and records their SHA-256.

    Nothing time-dependent is written, so identical inputs give identical bytes.
    """

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.artifacts: List[Dict[str, str]] = []

    def _record(self, path: Path, kind: str) -> Path:
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        self.artifacts.append({"file": path.name, "kind": kind, "sha256": digest})
        logger.debug("Artifact written", file=str(path), sha256=digest)
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = self.output_dir / name
        path.write_text(canonical_json(payload) + "\n", encoding="utf-8")
        return self._record(path, "json")

    def write_csv(self, name: str, rows: Iterable[Dict[str, Any]]) -> Path:
        path = self.output_dir / name
        pd.DataFrame(list(rows)).to_csv(path, index=False)
        return self._record(path, "csv")

    def write_manifest(self, command: str, passed: bool, checks: Dict[str, Any]) -> Path:
        manifest = {
            "command": command,
            "passed": passed,
            "checks": checks,
            "artifacts": sorted(self.artifacts, key=lambda a: a["file"]),
        }
        path = self.output_dir / "manifest.json"
        path.write_text(canonical_json(manifest) + "\n", encoding="utf-8")
        return path
