"""Short cycles by trace, in a half-arc-transitive graph and in a 2-arc-transitive one.

In the 2-arc-transitive graph every 2-path lies on the same number of cycles
of each length; in the half-arc-transitive one anchors and non-anchors differ.
"""

from cpmgraphs.cycles import cycle_census, format_cycle_census, generic_eight_cycle, trace_of_cycle
from cpmgraphs.graphs import Params, component


def main():
    for t in [(3, 2, 7, 2), (3, 2, 3, 1)]:
        g = component(Params(*t))
        print(f"{g.name}, cycles of length <= 8 through vertex 0")
        print(format_cycle_census(cycle_census(g, 8)))
        c = generic_eight_cycle(g)
        path = " ".join(f"<{g.vertices[k].i};{g.vertices[k].v}>" for k in c)
        print(f"generic 8-cycle: {path}")
        print(f"its trace: {trace_of_cycle(g, c)}\n")


if __name__ == "__main__":
    main()
