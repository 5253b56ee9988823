"""On-disk cache for sieve bitsets and blocks of value factorizations.

Entries are named by the sha256 of their key and carry a sha256 of their
payload.  A missing, truncated or mismatching entry is treated as absent,
deleted, and rebuilt by the caller.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

import numpy as np

from .ledger import ValueFactorization
from .modarith import PrimeSieve, install_sieve
from .polycore import poly_text

log = logging.getLogger(__name__)

ENV_VAR = "POLYPROD_CACHE"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "polyprod"


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Cache:
    def __init__(self, root: Path | str):
        self.root = Path(root)

    def _path(self, kind: str, key: str) -> Path:
        return self.root / f"{kind}-{_digest(key.encode())[:32]}.bin"

    def _read(self, path: Path) -> bytes | None:
        try:
            raw = path.read_bytes()
        except OSError:
            return None
        head, sep, payload = raw.partition(b"\n")
        if sep and head.decode(errors="replace") == _digest(payload):
            return payload
        log.warning("discarding corrupt cache entry %s", path)
        path.unlink(missing_ok=True)
        return None

    def _write(self, path: Path, payload: bytes) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_bytes(_digest(payload).encode() + b"\n" + payload)
        os.replace(tmp, path)

    # -- sieve ----------------------------------------------------------

    def sieve(self, limit: int) -> PrimeSieve:
        """Sieve up to ``limit``, loaded from disk if present; also installed as the shared sieve."""
        path = self._path("sieve", f"sieve|{limit}")
        payload = self._read(path)
        sieve = None
        if payload is not None:
            flags = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=limit + 1).astype(bool)
            if len(flags) == limit + 1:
                sieve = PrimeSieve(limit, flags)
        if sieve is None:
            sieve = PrimeSieve(limit)
            self._write(path, np.packbits(sieve.flags).tobytes())
        install_sieve(sieve)
        return sieve

    # -- factorization blocks --------------------------------------------

    def _block_path(self, poly, lo: int, hi: int) -> Path:
        return self._path("block", f"block|{poly_text(poly)}|{lo}|{hi}")

    def get_block(self, poly, lo: int, hi: int) -> list[ValueFactorization] | None:
        path = self._block_path(poly, lo, hi)
        payload = self._read(path)
        if payload is None:
            return None
        try:
            rows = json.loads(payload)
            out = [ValueFactorization(n, int(v), tuple((p, e) for p, e in fs), s) for n, v, s, fs in rows]
        except (ValueError, TypeError):
            path.unlink(missing_ok=True)
            return None
        if [vf.n for vf in out] != list(range(lo, hi + 1)):
            path.unlink(missing_ok=True)
            return None
        return out

    def put_block(self, poly, lo: int, hi: int, block: list[ValueFactorization]) -> None:
        # values go out as strings; they can exceed what JSON readers keep exactly
        rows = [[vf.n, str(vf.value), vf.sign, [list(f) for f in vf.factors]] for vf in block]
        self._write(self._block_path(poly, lo, hi), json.dumps(rows, separators=(",", ":")).encode())
