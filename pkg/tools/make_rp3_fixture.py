"""Regenerate the reduced RP^3 fixture by running the reducer on L(2,1)."""
from pathlib import Path

from threefold.complex import f_vector, write_tri
from threefold.flips import ReduceParams, reduce
from threefold.spaces import lens_space

DATA = Path(__file__).resolve().parents[1] / "src" / "threefold" / "data"


def main():
    K = reduce(lens_space(2, 1), ReduceParams(seed=0))
    f = tuple(f_vector(K))
    write_tri(K, DATA / "rp3_11.tri", [
        "RP^3 = L(2,1), reduced from the shell build with ReduceParams(seed=0)",
        "f-vector " + ",".join(map(str, f)),
    ])
    print(f)


if __name__ == "__main__":
    main()
