"""From laboratory bookkeeping to a state property system.

A LabWorld is a toy universe: laboratories with rosters of objects, each
tagged with its preparing device and a counterfactual yes/no answer for
every registering device. The walkthrough validates cross-laboratory
frequencies, partitions preparers into operational states and ideal
registers into properties, builds the certainly-true and certainly-yes
dual maps, and assembles the induced property lattice.

Run: python3 demos/lab_world_walkthrough.py
"""

from pathlib import Path

from subentity_lab.lecce import (
    build_lecce_sps,
    certainly_domains,
    check_partition_property,
    partition_effects,
    partition_states,
    validate_world,
)
from subentity_lab.modelio import parse_model

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "two_labs.labworld"


def main():
    world = parse_model(FIXTURE.read_bytes()).body["world"]
    print(f"laboratories {world.labs}, preparers {world.preparers}, "
          f"registers {world.registerers}")

    val = validate_world(world)
    print(f"cross-lab frequency agreement: {val.ok}")

    states = partition_states(world)
    print("\noperational states (preparer classes by frequency row)")
    for S in states:
        print(f"  state {S.id}: devices {sorted(S.member_devices)}, "
              f"extension in {world.labs[0]}: {sorted(S.extensions[world.labs[0]])}")
    ok, _ = check_partition_property(world, states)
    print(f"  state extensions partition every domain: {ok}")

    props, freq_only = partition_effects(world)
    print("\nproperties (ideal register classes by extension)")
    for E in props:
        print(f"  property {E.id}: devices {sorted(E.member_devices)}")
    if freq_only:
        print(f"  frequency-equivalent but extension-distinct pairs: {freq_only}")

    e_t, s_y = certainly_domains(states, props, world.labs)
    print("\ncertainly-true domains per state")
    for S in states:
        print(f"  E_t(state {S.id}) = {sorted(e_t[S.id])}")
    print("certainly-yes domains per property")
    for E in props:
        print(f"  S_y(property {E.id}) = {sorted(s_y[E.id])}")

    build = build_lecce_sps(world)
    print(f"\ninduced property lattice: {build.sps.lattice.size} elements")
    for line in build.report:
        print(f"  {line}")


if __name__ == "__main__":
    main()
