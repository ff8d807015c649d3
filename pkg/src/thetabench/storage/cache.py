"""On-disk cache of group tables, character tables and multiplicity matrices.

Group tables go to a little-endian binary file:

    header   "<4sH16s"  magic b"TBGT", format version, code-version hash
    shape    "<BHbIQIIH" family code, dim, eps, q, order, classes, generators, torus factors
    torus    "<Hb" per factor (degree, sign)
    elements uint8, order x dim x dim, canonical residues
    gens     uint8, generators x dim x dim
    classes  int64 representatives, sizes, element orders, then the class id of every element

Character tables and multiplicity matrices are versioned JSON documents. File
names are the first 16 hex chars of the sha256 of the canonical descriptor JSON.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from thetabench.algebra.field import Field
from thetabench.chartab.classfn import CharacterTable
from thetabench.chartab.dixon import DEFAULT_PRIME_SEARCH, character_table
from thetabench.core.errors import CacheFormatError, NonIntegerMultiplicity
from thetabench.core.logging import CODE_VERSION, serialize
from thetabench.core.types import Family
from thetabench.groups.dual_pair import DualPairEmbedding
from thetabench.groups.table import (
    DEFAULT_MAX_ORDER,
    GroupDescriptor,
    GroupTable,
    build_group,
    space_for,
)
from thetabench.weil.theta import MultiplicityMatrix, decompose_dual_pair

CACHE_ENV_VAR = "THETABENCH_CACHE_DIR"
DEFAULT_CACHE_DIR = ".thetabench-cache"
FORMAT_VERSION = 1
MAGIC = b"TBGT"

_HEADER = struct.Struct("<4sH16s")
_SHAPE = struct.Struct("<BHbIQIIH")
_FACTOR = struct.Struct("<Hb")
_FAMILY_CODES = {family: code for code, family in enumerate(Family)}
_CODE_HASH = hashlib.sha256(CODE_VERSION.encode()).digest()[:16]


def resolve_cache_dir(cache_dir: str | Path | None = None) -> Path:
    """--cache-dir, else $THETABENCH_CACHE_DIR, else .thetabench-cache."""
    if cache_dir:
        return Path(cache_dir)
    env = os.environ.get(CACHE_ENV_VAR)
    return Path(env) if env else Path(DEFAULT_CACHE_DIR)


def descriptor_key(*parts: GroupDescriptor | str) -> str:
    """Content address of one or more descriptors (plus free-form tags such as a psi twist)."""
    canonical = [
        p.model_dump(mode="json") if isinstance(p, GroupDescriptor) else p for p in parts
    ]
    text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def atomic_write(path: Path, data: bytes) -> None:
    """Write to a temporary file in the same directory, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


# group tables


def encode_group(table: GroupTable) -> bytes:
    desc = table.descriptor
    if desc is None:
        raise ValueError(f"{table.name} has no descriptor and cannot be cached")
    dim = table.dim
    parts = [
        _HEADER.pack(MAGIC, FORMAT_VERSION, _CODE_HASH),
        _SHAPE.pack(
            _FAMILY_CODES[desc.family],
            desc.dim,
            desc.eps,
            desc.q,
            table.order,
            table.num_classes,
            len(table.generators),
            len(desc.torus),
        ),
    ]
    parts.extend(_FACTOR.pack(a, s) for a, s in desc.torus)
    parts.append(table.elements.astype(np.uint8).tobytes())
    gens = np.array(table.generators, dtype=np.uint8).reshape(-1, dim, dim)
    parts.append(gens.tobytes())
    for arr in (table.class_reps, table.class_sizes, table.class_orders, table.class_of):
        parts.append(np.asarray(arr, dtype="<i8").tobytes())
    return b"".join(parts)


def decode_group(data: bytes, desc: GroupDescriptor, field: Field) -> GroupTable:
    """Rebuild a GroupTable from its binary form; raises CacheFormatError on any mismatch."""
    try:
        magic, version, code_hash = _HEADER.unpack_from(data, 0)
        offset = _HEADER.size
        if magic != MAGIC:
            raise CacheFormatError("not a group table file")
        if version != FORMAT_VERSION or code_hash != _CODE_HASH:
            raise CacheFormatError(f"group table format {version} from another code version")
        fam, dim, eps, q, order, k, ngens, nfactors = _SHAPE.unpack_from(data, offset)
        offset += _SHAPE.size
        torus = []
        for _ in range(nfactors):
            torus.append(_FACTOR.unpack_from(data, offset))
            offset += _FACTOR.size
        stored = GroupDescriptor(
            family=list(Family)[fam], dim=dim, q=q, eps=eps, torus=tuple(torus)
        )
        if stored != desc:
            raise CacheFormatError(f"file holds {stored.label()}, expected {desc.label()}")

        def take(count: int, dtype: str) -> np.ndarray:
            nonlocal offset
            arr = np.frombuffer(data, dtype=dtype, count=count, offset=offset)
            offset += arr.nbytes
            return arr

        elements = take(order * dim * dim, "u1").astype(np.int64).reshape(order, dim, dim)
        gens = take(ngens * dim * dim, "u1").astype(np.int64).reshape(ngens, dim, dim)
        reps, sizes, orders = (take(k, "<i8") for _ in range(3))
        class_of = take(order, "<i8").astype(np.int64)
    except (struct.error, ValueError) as e:
        raise CacheFormatError(f"truncated or corrupt group table: {e}") from e
    if offset != len(data):
        raise CacheFormatError("trailing bytes after the class block")
    space = space_for(desc, field) if desc.family != Family.TORUS else None
    table = GroupTable(desc.label(), field, elements, list(gens), desc, space, class_of=class_of)
    if not (
        np.array_equal(table.class_reps, reps)
        and np.array_equal(table.class_sizes, sizes)
        and np.array_equal(table.class_orders, orders)
    ):
        raise CacheFormatError(f"class block of {desc.label()} does not match its elements")
    return table


# json documents


def _json_bytes(kind: str, payload: dict[str, Any]) -> bytes:
    doc = {"format": kind, "version": FORMAT_VERSION, "code_version": CODE_VERSION, **payload}
    return json.dumps(doc, sort_keys=True, default=serialize).encode()


def _read_json(path: Path, kind: str) -> dict[str, Any]:
    try:
        doc = json.loads(path.read_bytes())
    except (OSError, json.JSONDecodeError) as e:
        raise CacheFormatError(f"{path.name}: {e}") from e
    if doc.get("format") != kind or doc.get("version") != FORMAT_VERSION:
        raise CacheFormatError(f"{path.name} is not a version {FORMAT_VERSION} {kind} document")
    if doc.get("code_version") != CODE_VERSION:
        raise CacheFormatError(f"{path.name} was written by version {doc.get('code_version')}")
    return doc


def _check_classes(group: GroupTable, data: dict[str, Any]) -> None:
    reps = [c["representative"] for c in data["classes"]]
    expected = [group.elements[int(r)].ravel().tolist() for r in group.class_reps]
    if reps != expected:
        raise CacheFormatError(f"stored classes do not match {group.name}")


class TableCache:
    """Content-addressed cache rooted at one directory.

    Every ``get_*`` method returns the cached object when the file is valid and
    otherwise builds, stores and returns it. A corrupt file is rebuilt.
    """

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def group_path(self, desc: GroupDescriptor) -> Path:
        return self.root / "groups" / f"{descriptor_key(desc)}.tbgt"

    def characters_path(self, desc: GroupDescriptor) -> Path:
        return self.root / "characters" / f"{descriptor_key(desc)}.json"

    def decomposition_path(
        self, left: GroupDescriptor, right: GroupDescriptor, psi_twist: str
    ) -> Path:
        return self.root / "theta" / f"{descriptor_key(left, right, psi_twist)}.json"

    def get_group(
        self, desc: GroupDescriptor, field: Field, max_order: int = DEFAULT_MAX_ORDER
    ) -> GroupTable:
        path = self.group_path(desc)
        if path.exists():
            try:
                table = decode_group(path.read_bytes(), desc, field)
                self.hits += 1
                return table
            except CacheFormatError as e:
                print(f"  cache: rebuilding {desc.label()} ({e})")
        self.misses += 1
        table = build_group(desc, field, max_order)
        atomic_write(path, encode_group(table))
        return table

    def get_character_table(
        self,
        group: GroupTable,
        max_order: int = DEFAULT_MAX_ORDER,
        prime_search: int = DEFAULT_PRIME_SEARCH,
    ) -> CharacterTable:
        desc = group.descriptor
        if desc is None:
            return character_table(group, max_order, prime_search)
        path = self.characters_path(desc)
        if path.exists():
            try:
                doc = _read_json(path, "character-table")
                _check_classes(group, doc["table"])
                table = CharacterTable.from_json(group, doc["table"])
                self.hits += 1
                return table
            except (CacheFormatError, KeyError, ValueError) as e:
                print(f"  cache: rebuilding characters of {group.name} ({e})")
        self.misses += 1
        table = character_table(group, max_order, prime_search)
        atomic_write(path, _json_bytes("character-table", {"table": table.to_json()}))
        return table

    def get_decomposition(
        self, pair: DualPairEmbedding, left: CharacterTable, right: CharacterTable
    ) -> MultiplicityMatrix:
        ldesc, rdesc = left.group.descriptor, right.group.descriptor
        if ldesc is None or rdesc is None:
            return decompose_dual_pair(pair, left, right)
        path = self.decomposition_path(ldesc, rdesc, pair.field.psi_twist)
        if path.exists():
            try:
                doc = _read_json(path, "multiplicity-matrix")
                mm = MultiplicityMatrix.from_json(left, right, doc["matrix"])
                self.hits += 1
                return mm
            except (CacheFormatError, KeyError, ValueError, NonIntegerMultiplicity) as e:
                print(f"  cache: rebuilding {ldesc.label()} x {rdesc.label()} ({e})")
        self.misses += 1
        mm = decompose_dual_pair(pair, left, right)
        atomic_write(path, _json_bytes("multiplicity-matrix", {"matrix": mm.to_json()}))
        return mm
