"""Binary checkpoint container for model weights and optimizer state.

Layout (all integers little-endian unsigned 32-bit, floats little-endian
IEEE-754 binary64):

    bytes 0..7   magic b"LRDCKPT1"
    u32          metadata length L
    L bytes      UTF-8 JSON metadata (sorted keys)
    u32          array count K
    per array:   u32 ndim, u32 dims[ndim], raw float64 data (row-major)

The same container carries both kinds of payload; metadata["kind"] selects
the schema ("mlp" records layer sizes and dropout keep probability,
"optimizer" records the rule, hyperparameters and step counter).
"""

import json
import struct

import numpy as np

from .errors import DataFormatError
from .ioutil import atomic_write_bytes
from .network import Mlp
from .optim import Optimizer

MAGIC = b"LRDCKPT1"


def save_arrays(path, metadata, arrays):
    chunks = [MAGIC]
    meta = json.dumps(metadata, sort_keys=True).encode("utf-8")
    chunks.append(struct.pack("<I", len(meta)))
    chunks.append(meta)
    chunks.append(struct.pack("<I", len(arrays)))
    for arr in arrays:
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim and not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)  # 0-d would be promoted to 1-d
        chunks.append(struct.pack("<I", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}I", *arr.shape))
        chunks.append(arr.astype("<f8", copy=False).tobytes())
    atomic_write_bytes(path, b"".join(chunks))


def load_arrays(path):
    with open(path, "rb") as fh:
        blob = fh.read()

    def need(offset, count, what):
        if offset + count > len(blob):
            raise DataFormatError(path, offset, f"{count} bytes of {what}",
                                  f"{len(blob) - offset} bytes left")
        return blob[offset:offset + count]

    if need(0, 8, "magic") != MAGIC:
        raise DataFormatError(path, 0, MAGIC, blob[:8])
    off = 8
    (meta_len,) = struct.unpack("<I", need(off, 4, "metadata length"))
    off += 4
    metadata = json.loads(need(off, meta_len, "metadata").decode("utf-8"))
    off += meta_len
    (count,) = struct.unpack("<I", need(off, 4, "array count"))
    off += 4
    arrays = []
    for _ in range(count):
        (ndim,) = struct.unpack("<I", need(off, 4, "ndim"))
        off += 4
        dims = struct.unpack(f"<{ndim}I", need(off, 4 * ndim, "dims"))
        off += 4 * ndim
        n_bytes = 8 * int(np.prod(dims, dtype=np.int64)) if ndim else 8
        raw = need(off, n_bytes, "float64 data")
        off += n_bytes
        arrays.append(np.frombuffer(raw, dtype="<f8").reshape(dims).copy())
    if off != len(blob):
        raise DataFormatError(path, off, "end of file", f"{len(blob) - off} trailing bytes")
    return metadata, arrays


def save_model(path, model):
    meta = {
        "kind": "mlp",
        "layer_sizes": list(model.layer_sizes),
        "dropout_keep": model.dropout_keep,
    }
    save_arrays(path, meta, model.params())


def load_model(path):
    meta, arrays = load_arrays(path)
    if meta.get("kind") != "mlp":
        raise DataFormatError(path, 12, "metadata kind 'mlp'", meta.get("kind"))
    model = Mlp(meta["layer_sizes"], meta["dropout_keep"])
    params = model.params()
    if len(params) != len(arrays):
        raise DataFormatError(path, 12, f"{len(params)} arrays", len(arrays))
    for dst, src in zip(params, arrays):
        np.copyto(dst, src)
    return model


def save_optimizer(path, opt):
    state = opt.state_dict()
    rule = opt.rule
    meta = {
        "kind": "optimizer",
        "rule": rule.kind,
        "beta1": rule.beta1,
        "beta2": rule.beta2,
        "eps": rule.eps,
        "grad_weight": rule.grad_weight,
        "step_count": state["step_count"],
        "beta1_pow": state["beta1_pow"],
        "beta2_pow": state["beta2_pow"],
        "slots": [k for k in ("momentum", "second_moment", "max_second_moment")
                  if k in state],
    }
    arrays = []
    for slot in meta["slots"]:
        arrays.extend(state[slot])
    save_arrays(path, meta, arrays)


def load_optimizer_state(path):
    """Metadata dict plus a state dict consumable by Optimizer.load_state_dict."""
    meta, arrays = load_arrays(path)
    if meta.get("kind") != "optimizer":
        raise DataFormatError(path, 12, "metadata kind 'optimizer'", meta.get("kind"))
    slots = meta["slots"]
    per_slot = len(arrays) // len(slots)
    state = {
        "step_count": meta["step_count"],
        "beta1_pow": meta["beta1_pow"],
        "beta2_pow": meta["beta2_pow"],
    }
    for i, slot in enumerate(slots):
        state[slot] = arrays[i * per_slot:(i + 1) * per_slot]
    return meta, state


def restore_optimizer(path, params, rule, config, rng=None):
    meta, state = load_optimizer_state(path)
    if meta["rule"] != rule.kind:
        raise DataFormatError(path, 12, f"rule {rule.kind!r}", meta["rule"])
    opt = Optimizer(params, rule, config, rng)
    opt.load_state_dict(state)
    return opt
