"""Regenerate the searched surface fixtures in src/threefold/data."""
from pathlib import Path

from threefold.complex import write_tri
from threefold.search import find_klein_bottle_8_20, find_torus_10_rot4

DATA = Path(__file__).resolve().parents[1] / "src" / "threefold" / "data"


def main():
    kb = find_klein_bottle_8_20()
    write_tri(kb[0], DATA / "klein_bottle_8_20.tri", [
        "8-vertex Klein bottle, union of triangle orbits under the order-8 gluing group",
        f"first of {len(kb)} search hits in lexicographic order (threefold.search.find_klein_bottle_8_20)",
        "automorphism group has order 8; mapping tori reproduce B1..B4 homology",
    ])
    tori = find_torus_10_rot4()
    write_tri(tori[0], DATA / "torus_10_rot4.tri", [
        "10-vertex torus invariant under the rotation (3,4,5,6)(7,8,9,10)",
        "first search hit (threefold.search.find_torus_10_rot4); mapping torus is G4",
    ])


if __name__ == "__main__":
    main()
