"""Map/matrix file formats and JSON run reports.

Maps and matrices are stored as JSON with expression-string coefficients
(exactness survives the round trip and files diff cleanly).  A report
records everything needed to reproduce a run; rerunning with the same
seed reproduces it byte for byte except for the timing field.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Sequence

from .expressions import ParseError, poly_parse
from .linalg import mat
from .poly import Poly
from .projective import BALL, SIEGEL, Hyperplane
from .ratmap import RationalMap
from .scalars import FLOAT_CONTEXT, Scalar

MAPFILE_KEYS = {"n", "N", "model", "variables", "components", "denominator",
                "backend", "metadata"}


@dataclass
class MapFile:
    """Validated textual form of a RationalMap."""

    n: int
    N: int
    model: str
    variables: list[str]
    components: list[str]
    denominator: str
    backend: str = "exact"
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_obj(cls, obj: dict) -> "MapFile":
        if not isinstance(obj, dict):
            raise ParseError("map file must be a JSON object", 0)
        missing = {"n", "N", "model", "components", "denominator"} - set(obj)
        if missing:
            raise ParseError(f"map file missing keys {sorted(missing)}", 0)
        comps = obj["components"]
        if isinstance(comps, list) and comps and isinstance(comps[0], dict):
            comps = [c["numerator"] for c in comps]
        variables = obj.get("variables")
        if not variables:
            n = int(obj["n"])
            variables = ["z", "w"] if n == 2 else \
                [f"z{i + 1}" for i in range(n)]
        mf = cls(int(obj["n"]), int(obj["N"]), str(obj["model"]),
                 list(variables), [str(c) for c in comps],
                 str(obj["denominator"]), str(obj.get("backend", "exact")),
                 dict(obj.get("metadata", {})))
        mf._check()
        return mf

    def _check(self) -> None:
        if self.model not in (BALL, SIEGEL):
            raise ParseError(f"unknown model {self.model!r}", 0)
        if self.backend not in ("exact", "float"):
            raise ParseError(f"unknown backend {self.backend!r}", 0)
        if len(self.variables) != self.n:
            raise ParseError("variable list length must equal n", 0)
        if len(self.components) != self.N:
            raise ParseError("component count must equal N", 0)

    @classmethod
    def load(cls, path: str) -> "MapFile":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_obj(json.load(fh))

    def to_obj(self) -> dict:
        return {"n": self.n, "N": self.N, "model": self.model,
                "variables": list(self.variables),
                "components": [{"numerator": c} for c in self.components],
                "denominator": self.denominator, "backend": self.backend,
                "metadata": self.metadata}

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def to_rational_map(self, seed: int = 0) -> RationalMap:
        comps = tuple(poly_parse(c, self.variables) for c in self.components)
        den = poly_parse(self.denominator, self.variables)
        if self.backend == "float":
            comps = tuple(p.to_float() for p in comps)
            den = den.to_float()
        return RationalMap(comps, den, self.model, seed=seed)

    @classmethod
    def from_rational_map(cls, f: RationalMap,
                          variables: Sequence[str] | None = None,
                          metadata: dict | None = None) -> "MapFile":
        names = list(variables) if variables else (
            ["z", "w"] if f.n == 2 else [f"z{i + 1}" for i in range(f.n)])
        backend = "exact" if f.is_exact() else "float"
        return cls(f.n, f.N, f.model, names,
                   [p.to_expr(names) for p in f.components],
                   f.denominator.to_expr(names), backend, metadata or {})

    def digest(self) -> str:
        payload = json.dumps(self.to_obj(), sort_keys=True)
        return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()


def matrix_to_obj(matrix) -> dict:
    return {"rows": [[x.to_expr() for x in row] for row in matrix]}


def matrix_from_obj(obj: dict):
    from .expressions import scalar_parse
    return mat([[scalar_parse(x) for x in row] for row in obj["rows"]])


def hyperplane_to_obj(h: Hyperplane) -> dict:
    return {"model": h.model, "covector": [c.to_expr() for c in h.covector]}


def witness_to_obj(w) -> dict:
    return {"source": hyperplane_to_obj(w.source),
            "target": hyperplane_to_obj(w.target),
            "scale": w.scale.to_expr()}


@dataclass
class Report:
    """Reproducible record of one CLI command run."""

    command: str
    inputs_digest: str
    verdict: str
    backend: str
    precision: int
    tolerance: float
    seed: int
    timing_ms: float
    witness: dict | None = None
    certificate: list | None = None
    details: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {"command": self.command, "inputs_digest": self.inputs_digest,
                "verdict": self.verdict, "witness": self.witness,
                "certificate": self.certificate, "backend": self.backend,
                "precision": self.precision, "tolerance": self.tolerance,
                "seed": self.seed, "timing_ms": self.timing_ms,
                "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, indent=2,
                          default=str)


def make_report(command: str, digest: str, verdict: str, seed: int,
                timing_ms: float, witness=None, certificate=None,
                details: dict | None = None, backend: str = "exact") -> Report:
    return Report(command=command, inputs_digest=digest, verdict=verdict,
                  backend=backend, precision=FLOAT_CONTEXT.prec,
                  tolerance=FLOAT_CONTEXT.eps, seed=seed,
                  timing_ms=round(timing_ms, 3), witness=witness,
                  certificate=certificate, details=details or {})


def digest_of(obj: Any) -> str:
    payload = json.dumps(obj, sort_keys=True, default=str)
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()
