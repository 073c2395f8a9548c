"""The subentity problem at desk scale, in two acts.

Act 1: the compound system holds an entangled pure state. If the part is
only allowed pure states, the exhaustive witness search proves that no
surjective state map and injective property map can satisfy the
covariance condition. The entangled whole has no candidate image: every
pure qubit makes two of the four atom properties certain, while the Bell
state makes none of their liftings certain.

Act 2: admit density operators as genuine states of the part. The
partial trace of the Bell state is the maximally mixed operator, and the
canonical pair (m = partial trace, n = tensoring with the identity)
satisfies every clause. The searcher independently finds a witness too.

Run: python3 demos/subentity_story.py
"""

import numpy as np

from subentity_lab.hilbert import tensor
from subentity_lab.sps import quantum_sps
from subentity_lab.subentity import (
    build_completed_model,
    canonical_witness_check,
    search_witness,
    verify_witness,
)


def ket(*amps):
    v = np.array(amps, dtype=complex)
    return v / np.linalg.norm(v)


def proj(v):
    return np.outer(v, v.conj())


Z0, Z1 = ket(1, 0), ket(0, 1)
PLUS, MINUS = ket(1, 1), ket(1, -1)
BELL = ket(1, 0, 0, 1)

PART_ATOMS = [proj(Z0), proj(Z1), proj(PLUS), proj(MINUS)]
WHOLE_STATES = [proj(np.kron(Z0, Z0)), proj(np.kron(Z1, Z0)),
                proj(np.kron(PLUS, Z0)), proj(np.kron(MINUS, Z0)), proj(BELL)]


def act_one():
    print("Act 1: pure part states only")
    part = quantum_sps(PART_ATOMS, PART_ATOMS)
    whole = quantum_sps(WHOLE_STATES, [tensor(P, np.eye(2)) for P in PART_ATOMS])
    for idx in range(5):
        actual = sorted(whole.prop_ops[a].rank for a in whole.sps.xi[idx])
        print(f"  whole state {idx}: actual property ranks {actual}")
    witness = search_witness(part.sps, whole.sps)
    print(f"  exhaustive search result: {witness}")
    assert witness is None


def act_two():
    print("\nAct 2: the completed model (density operators as states)")
    model = build_completed_model((2, 2), WHOLE_STATES, PART_ATOMS)
    print(f"  part states after deduplicating partial traces: {len(model.part.state_ops)}")
    for i, S in enumerate(model.part.state_ops):
        print(f"    state {i}: diag {np.round(np.diag(S.matrix).real, 3)}")
    print(f"  canonical witness m = {model.witness.m}, n = {model.witness.n}")
    report = verify_witness(model.part.sps, model.whole.sps, model.witness)
    print(f"  clause check: {'all clauses hold' if report.ok else report.detail}")
    print(f"  Born-rule covariance identity: {canonical_witness_check(model)}")
    found = search_witness(model.part.sps, model.whole.sps)
    print(f"  searcher agrees, witness found: m = {found.m}, n = {found.n}")


def main():
    act_one()
    act_two()


if __name__ == "__main__":
    main()
