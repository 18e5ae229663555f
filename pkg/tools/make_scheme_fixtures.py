"""Write the shipped identification schemes to src/threefold/data."""
from pathlib import Path

from threefold.quotient import write_ids
from threefold.spaces import g6_scheme, lens_scheme, octahedral_scheme, prism_scheme, truncated_cube_scheme

DATA = Path(__file__).resolve().parents[1] / "src" / "threefold" / "data"


def main():
    write_ids(g6_scheme(2), DATA / "g6.ids", [
        "Hantzsche-Wendt space G6: two unit-half cubes, one per orbit of the grid under the group",
        "generated by (x+1/2, 1/2-y, -z), (-x, y+1/2, 1/2-z), (1/2-x, -y, z+1/2) and Z^3",
    ])
    write_ids(lens_scheme(5, 2), DATA / "lens_5_2.ids", ["solid lens with 5 slices, twist 2"])
    write_ids(prism_scheme(2), DATA / "prism_2.ids", ["cube: ends twisted by pi/2, sides by pi/2"])
    write_ids(octahedral_scheme(), DATA / "octahedral.ids", ["octahedron, opposite faces twisted by pi/3"])
    write_ids(truncated_cube_scheme(), DATA / "truncated_cube.ids",
              ["truncated cube, octagons twisted by pi/4, triangles by pi/3"])


if __name__ == "__main__":
    main()
