#!/usr/bin/env python3
"""Download the four MNIST IDX files, verify checksums, and unpack them.

The library itself never touches the network; run this once (or copy the
files in by hand) and point LRDOPT_DATA_DIR at the target directory.

Usage:
    python3 scripts/fetch_mnist.py [--dest data/mnist]
"""

import argparse
import gzip
import hashlib
import os
import struct
import sys
import urllib.request

MIRRORS = [
    "https://ossci-datasets.s3.amazonaws.com/mnist/",
    "https://storage.googleapis.com/cvdf-datasets/mnist/",
]

# (gz filename, canonical md5 of the gz archive)
FILES = [
    ("train-images-idx3-ubyte.gz", "f68b3c2dcbeaaa9fbdd348bbdeb94873"),
    ("train-labels-idx1-ubyte.gz", "d53e105ee54ea40749a09fcbcd1e9432"),
    ("t10k-images-idx3-ubyte.gz", "9fb629c4189551a2d022fa330f9573f3"),
    ("t10k-labels-idx1-ubyte.gz", "ec29112dd5afa0611ce80d1b7f02629c"),
]

EXPECTED_COUNTS = {
    "train-images-idx3-ubyte": 60000,
    "train-labels-idx1-ubyte": 60000,
    "t10k-images-idx3-ubyte": 10000,
    "t10k-labels-idx1-ubyte": 10000,
}


def download(name, md5sum):
    last_error = None
    for mirror in MIRRORS:
        url = mirror + name
        try:
            print(f"downloading {url}")
            with urllib.request.urlopen(url, timeout=60) as resp:
                blob = resp.read()
        except OSError as exc:
            last_error = exc
            continue
        digest = hashlib.md5(blob).hexdigest()
        if digest != md5sum:
            last_error = RuntimeError(
                f"{name}: md5 mismatch (expected {md5sum}, got {digest})"
            )
            continue
        return blob
    raise SystemExit(f"failed to fetch {name}: {last_error}")


def unpack(blob, dest_path):
    raw = gzip.decompress(blob)
    name = os.path.basename(dest_path)
    (magic, count) = struct.unpack(">II", raw[:8])
    expected_magic = 0x803 if "images" in name else 0x801
    if magic != expected_magic:
        raise SystemExit(f"{name}: bad magic 0x{magic:08x}")
    if count != EXPECTED_COUNTS[name]:
        raise SystemExit(f"{name}: unexpected item count {count}")
    with open(dest_path, "wb") as fh:
        fh.write(raw)
    print(f"wrote {dest_path} ({len(raw)} bytes, {count} items)")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data/mnist")
    args = parser.parse_args(argv)
    os.makedirs(args.dest, exist_ok=True)
    for gz_name, md5sum in FILES:
        target = os.path.join(args.dest, gz_name[:-3])
        if os.path.exists(target):
            print(f"already present: {target}")
            continue
        blob = download(gz_name, md5sum)
        unpack(blob, target)
    print(f"done; set LRDOPT_DATA_DIR={args.dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
