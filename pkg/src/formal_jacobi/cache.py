"""On-disk cache of Jacobi form bases.

One file per (k, m, kind, prec).  The first line is a JSON header; each
further line is one basis element as a JSON list of ``[n, r, "num/den"]``.
Files are written to a temporary name and renamed into place.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .jacobi import JacobiFormQExp, SpaceKind, _kind, jacobi_basis
from .kernel.generators import eisenstein, phi_0_1, phi_m1_2, phi_m2_1
from .kernel.series import _normalize

SCHEMA_VERSION = 1
CACHE_ENV = "FORMAL_JACOBI_CACHE_DIR"
_FP_PREC = 8


def _fmt(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


@lru_cache(maxsize=1)
def generator_fingerprint() -> str:
    """sha256 over the generator expansions the bases are built from."""
    h = hashlib.sha256()
    for name, s in (("E4", eisenstein(4, _FP_PREC)), ("E6", eisenstein(6, _FP_PREC)),
                    ("phi_0_1", phi_0_1(_FP_PREC)), ("phi_m2_1", phi_m2_1(_FP_PREC)),
                    ("phi_m1_2", phi_m1_2(_FP_PREC))):
        items = sorted((str(e), _fmt(c)) for e, c in s.terms().items())
        h.update(name.encode())
        h.update(json.dumps(items).encode())
    return h.hexdigest()


def default_cache_dir() -> Path | None:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


class BasisCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def path(self, k: int, m: int, kind: SpaceKind, prec: int) -> Path:
        tag = str(kind).replace(":", "")
        return self.root / f"J_k{k}_m{m}_{tag}_p{prec}.jsonl"

    def _header(self, k, m, kind, prec, count) -> dict:
        return {"schemaVersion": SCHEMA_VERSION, "k": k, "m": m, "kind": str(kind), "prec": prec,
                "generatorFingerprint": generator_fingerprint(), "count": count}

    def save(self, k: int, m: int, kind, prec: int, basis: list[JacobiFormQExp]) -> Path:
        kind = _kind(kind)
        self.root.mkdir(parents=True, exist_ok=True)
        lines = [json.dumps(self._header(k, m, kind, prec, len(basis)), sort_keys=True)]
        for phi in basis:
            lines.append(json.dumps([[n, r, _fmt(c)] for (n, r), c in sorted(phi.items())]))
        target = self.path(k, m, kind, prec)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=target.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write("\n".join(lines) + "\n")
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def load(self, k: int, m: int, kind, prec: int) -> list[JacobiFormQExp] | None:
        """The cached basis, or None when absent, stale or unreadable."""
        kind = _kind(kind)
        p = self.path(k, m, kind, prec)
        if not p.exists():
            return None
        try:
            with open(p) as fh:
                header = json.loads(fh.readline())
                if header != self._header(k, m, kind, prec, header.get("count")):
                    return None
                out = []
                for line in fh:
                    if not line.strip():
                        continue
                    phi = JacobiFormQExp(k, m, prec)
                    for n, r, c in json.loads(line):
                        phi.table[n, r + phi.rmax] = _normalize(Fraction(c))
                    out.append(phi)
        except (OSError, ValueError, KeyError, IndexError):
            return None
        if len(out) != header["count"]:
            return None
        return out

    def basis(self, k: int, m: int, kind, prec: int) -> list[JacobiFormQExp]:
        got = self.load(k, m, kind, prec)
        if got is not None:
            self.hits += 1
            return got
        self.misses += 1
        basis = jacobi_basis(k, m, kind, prec)
        self.save(k, m, kind, prec, basis)
        return basis
