"""Gallery run of the eight-axiom battery over a zoo of small lattices.

Each lattice is turned into a state property system with one state per
atom, and every axiom checker reports pass/fail together with a witness
or counterexample. The hexagon is the classic weak-modularity failure;
the Boolean square is reducible; every finite model fails the infinite
length requirement, and the checker reports the largest mutually
orthogonal family it found instead.

Run: python3 demos/axiom_gallery.py
"""

from subentity_lab.axioms import run_battery
from subentity_lab.lattice import build_lattice
from subentity_lab.sps import atomic_sps

ZOO = {
    "two-chain": (2, [(0, 1)]),
    "Boolean square": (4, [(0, 1), (0, 2), (1, 3), (2, 3)]),
    "Boolean cube": (8, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4),
                         (2, 6), (3, 5), (3, 6), (4, 7), (5, 7), (6, 7)]),
    "MO2 (4 atoms)": (6, [(0, i) for i in (1, 2, 3, 4)] + [(i, 5) for i in (1, 2, 3, 4)]),
    "hexagon": (6, [(0, 1), (1, 3), (3, 5), (0, 2), (2, 4), (4, 5)]),
}


def main():
    for name, (size, order) in ZOO.items():
        lat = build_lattice(size, order)
        system = atomic_sps(lat)
        print(f"\n=== {name} ({size} elements, atoms {lat.atoms}) ===")
        for v in run_battery(system):
            status = {True: "pass", False: "FAIL", None: "ambiguous"}[v.passed]
            extra = ""
            if v.witness is not None:
                extra = f"  witness {v.witness}"
            elif v.counterexample is not None:
                extra = f"  counterexample {v.counterexample}"
            if v.note:
                extra += f"  ({v.note})"
            print(f"  {v.axiom:<22} {status}{extra}")


if __name__ == "__main__":
    main()
