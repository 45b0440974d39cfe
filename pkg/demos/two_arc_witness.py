"""Build the involution nu that makes a CPM graph 2-arc-transitive and watch what it does.

nu fixes the edge <0;(0,0)> - <1;(1,0)> pointwise but moves <1;(-1,0)>, so the
stabiliser of the vertex <0;(0,0)> can swap the two 2-arcs starting along that edge.
"""

from cpmgraphs.graphs import Params, component
from cpmgraphs.permgroup import automorphism_group, local_action_at
from cpmgraphs.symmetry import classify, nu


def show(p: Params) -> None:
    g = component(p)
    perm = nu(p)
    print(f"{p}: {g.order} vertices, class {classify(p).kind.value}")
    for v in [(0, (0, 0)), (1, (1, 0)), (1, (-1, 0))]:
        k = g.index(v)
        print(f"  <{g.vertices[k].i};{g.vertices[k].v}>  ->  <{g.vertices[perm(k)].i};{g.vertices[perm(k)].v}>")
    print(f"  automorphism: {g.is_automorphism(perm)}, involution: {(perm * perm).is_identity()}")
    if g.order <= 300:
        la = local_action_at(automorphism_group(g), g, 0)
        print(f"  local action at <0;(0,0)>: order {la.order} (the full symmetric group on 4 points)")


if __name__ == "__main__":
    for t in [(3, 2, 3, 1), (5, 2, 5, 1), (2, 2, 4, 1), (10, 2, 20, 3)]:
        show(Params(*t))
        print()
