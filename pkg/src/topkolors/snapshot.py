"""Snapshot files: persist an index's inputs, rebuild on load.

Builds are deterministic functions of (input data, parameters), so a
snapshot stores exactly those and loading reconstructs the index from
scratch.  Layout:

    magic "TKSNAP" | version u8 | kind u8 |
    [u32 LE length | bytes] x2  (meta JSON, payload) |
    crc32 u32 LE over everything before it

Array kinds carry colors (int32 LE) then priorities (int64 LE) as the
payload; the document kind carries each document length-prefixed.  Any
structural defect, bad checksum, unknown version or kind raises
SnapshotCorrupt; asking a loaded snapshot to be something it is not is
KindMismatch territory and left to callers.

Also here: the plain-text input formats the command line accepts, since
they feed the same constructors.
"""

from __future__ import annotations

import json
import struct
import zlib

import numpy as np

from .chunked import ChunkedParams, ChunkedTopK
from .docs import DocumentCollection, DocumentIndex
from .errors import ParseError, SnapshotCorrupt
from .model import ColorArray, new_color_array
from .optimal import OptimalParams, OptimalTopK
from .sparse import SparseTopK
from .wavelet import WaveletTopK

MAGIC = b"TKSNAP"
VERSION = 1
KIND_BYTES = {"wavelet": 1, "sparse": 2, "optimal": 3, "chunked": 4, "docs": 5}
KIND_NAMES = {v: k for k, v in KIND_BYTES.items()}


def _pack_sections(kind_byte: int, sections: list[bytes]) -> bytes:
    body = bytearray()
    body += MAGIC
    body.append(VERSION)
    body.append(kind_byte)
    for sec in sections:
        body += struct.pack("<I", len(sec))
        body += sec
    body += struct.pack("<I", zlib.crc32(bytes(body)) & 0xFFFFFFFF)
    return bytes(body)


def _unpack_sections(blob: bytes):
    if len(blob) < len(MAGIC) + 2 + 4:
        raise SnapshotCorrupt("snapshot truncated")
    if blob[: len(MAGIC)] != MAGIC:
        raise SnapshotCorrupt("bad magic")
    crc_stored = struct.unpack("<I", blob[-4:])[0]
    if zlib.crc32(blob[:-4]) & 0xFFFFFFFF != crc_stored:
        raise SnapshotCorrupt("checksum mismatch")
    version = blob[len(MAGIC)]
    if version != VERSION:
        raise SnapshotCorrupt(f"unsupported version {version}")
    kind_byte = blob[len(MAGIC) + 1]
    if kind_byte not in KIND_NAMES:
        raise SnapshotCorrupt(f"unknown kind byte {kind_byte}")
    sections = []
    pos = len(MAGIC) + 2
    end = len(blob) - 4
    while pos < end:
        if pos + 4 > end:
            raise SnapshotCorrupt("section header truncated")
        (length,) = struct.unpack("<I", blob[pos : pos + 4])
        pos += 4
        if pos + length > end:
            raise SnapshotCorrupt("section body truncated")
        sections.append(blob[pos : pos + length])
        pos += length
    return KIND_NAMES[kind_byte], sections


def _array_payload(arr: ColorArray) -> bytes:
    return (
        np.ascontiguousarray(arr.colors, dtype="<i4").tobytes()
        + np.ascontiguousarray(arr.priority_of, dtype="<i8").tobytes()
    )


def _array_from_payload(meta: dict, payload: bytes) -> ColorArray:
    n, sigma = meta["n"], meta["sigma"]
    want = 4 * n + 8 * sigma
    if len(payload) != want:
        raise SnapshotCorrupt(
            f"array payload is {len(payload)} bytes, expected {want}"
        )
    colors = np.frombuffer(payload[: 4 * n], dtype="<i4").astype(np.int32)
    prio = np.frombuffer(payload[4 * n :], dtype="<i8").astype(np.int64)
    return ColorArray(colors, prio)


def _docs_payload(docs: list[bytes]) -> bytes:
    out = bytearray()
    for d in docs:
        out += struct.pack("<I", len(d))
        out += d
    return bytes(out)


def _docs_from_payload(payload: bytes) -> list[bytes]:
    docs = []
    pos = 0
    while pos < len(payload):
        if pos + 4 > len(payload):
            raise SnapshotCorrupt("document header truncated")
        (length,) = struct.unpack("<I", payload[pos : pos + 4])
        pos += 4
        if pos + length > len(payload):
            raise SnapshotCorrupt("document body truncated")
        docs.append(payload[pos : pos + length])
        pos += length
    return docs


def save_index(path: str, index) -> None:
    if isinstance(index, WaveletTopK):
        kind, params = "wavelet", {}
    elif isinstance(index, SparseTopK):
        kind, params = "sparse", {"f": index.f}
    elif isinstance(index, OptimalTopK):
        kind, params = "optimal", {
            "delta_floor": index.params.delta_floor,
            "delta_override": index.params.delta_override,
            "last_level_len": index.params.last_level_len,
            "f_inner": index.params.f_inner,
            "f_last": index.params.f_last,
            "word_key_bits": index.params.word_key_bits,
        }
    elif isinstance(index, ChunkedTopK):
        kind, params = "chunked", {"chunk_len_override": index.chunk_len_override}
    elif isinstance(index, DocumentIndex):
        kind = "docs"
        params = {
            "weights": [index.weights[j]
                        for j in range(index.collection.num_docs)],
            "t_values": index.t_values,
        }
    else:
        raise ParseError(f"cannot snapshot object of type {type(index).__name__}")
    if kind == "docs":
        meta = {"kind": kind, "params": params}
        payload = _docs_payload(index.collection.docs)
    else:
        arr = index.arr
        meta = {"kind": kind, "params": params, "n": arr.n, "sigma": arr.sigma}
        payload = _array_payload(arr)
    blob = _pack_sections(
        KIND_BYTES[kind],
        [json.dumps(meta, sort_keys=True).encode(), payload],
    )
    with open(path, "wb") as fh:
        fh.write(blob)


def load_index(path: str):
    """Rebuild the saved index; returns (kind_name, index)."""
    with open(path, "rb") as fh:
        blob = fh.read()
    kind, sections = _unpack_sections(blob)
    if len(sections) != 2:
        raise SnapshotCorrupt(f"expected 2 sections, found {len(sections)}")
    try:
        meta = json.loads(sections[0].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SnapshotCorrupt(f"meta section unreadable: {exc}") from exc
    if meta.get("kind") != kind:
        raise SnapshotCorrupt("meta kind disagrees with header byte")
    params = meta.get("params", {})
    if kind == "docs":
        docs = _docs_from_payload(sections[1])
        coll = DocumentCollection(docs)
        weights = {j: w for j, w in enumerate(params["weights"])}
        return kind, DocumentIndex(coll, weights, t_values=params["t_values"])
    arr = _array_from_payload(meta, sections[1])
    if kind == "wavelet":
        return kind, WaveletTopK(arr)
    if kind == "sparse":
        return kind, SparseTopK(arr, f=params["f"])
    if kind == "optimal":
        return kind, OptimalTopK(arr, OptimalParams(**params))
    return kind, ChunkedTopK(
        arr, ChunkedParams(chunk_len_override=params["chunk_len_override"])
    )


def parse_array_text(text: str) -> ColorArray:
    """Three-line format: "N sigma", N color ids, sigma priorities."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 3:
        raise ParseError(f"expected 3 non-empty lines, found {len(lines)}")
    try:
        head = [int(v) for v in lines[0].split()]
        ids = [int(v) for v in lines[1].split()]
        prio = [int(v) for v in lines[2].split()]
    except ValueError as exc:
        raise ParseError(f"non-integer token: {exc}") from exc
    if len(head) != 2:
        raise ParseError("header must be exactly: N sigma")
    n, sigma = head
    if len(ids) != n:
        raise ParseError(f"expected {n} color ids, found {len(ids)}")
    if len(prio) != sigma:
        raise ParseError(f"expected {sigma} priorities, found {len(prio)}")
    return new_color_array(ids, {c: p for c, p in enumerate(prio)})


def parse_corpus_text(text: str):
    """Header "s w_1 .. w_s" then s lines, one document each."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("missing corpus header line")
    try:
        head = [int(v) for v in lines[0].split()]
    except ValueError as exc:
        raise ParseError(f"non-integer token in header: {exc}") from exc
    if not head:
        raise ParseError("empty corpus header")
    s = head[0]
    if len(head) != s + 1:
        raise ParseError(
            f"header names {s} documents but carries {len(head) - 1} weights"
        )
    docs = lines[1 : s + 1]
    if len(docs) != s:
        raise ParseError(f"expected {s} document lines, found {len(docs)}")
    collection = DocumentCollection([d.encode() for d in docs])
    weights = {j: w for j, w in enumerate(head[1:])}
    return collection, weights
