#!/usr/bin/env python3
"""Convert a scikit-feature .mat dataset (key 'X') to headerless CSV."""

import sys

import numpy as np
import scipy.io


def main() -> None:
    if len(sys.argv) != 3:
        sys.exit(f"usage: {sys.argv[0]} input.mat output.csv")
    data = scipy.io.loadmat(sys.argv[1])
    if "X" not in data:
        keys = [k for k in data if not k.startswith("__")]
        sys.exit(f"no 'X' key in {sys.argv[1]} (found {keys})")
    x = np.asarray(data["X"], dtype=float)
    np.savetxt(sys.argv[2], x, delimiter=",", fmt="%.17g")
    print(f"wrote {sys.argv[2]} with shape {x.shape}")


if __name__ == "__main__":
    main()
