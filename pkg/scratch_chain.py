import sys

sys.path.insert(0, "src")
from rp3bn.chain import CubeComplex, enumerate_twist_maps
from rp3bn.diagram import Diagram, parse_diagram

# twist map uniqueness
deformed = enumerate_twist_maps("deformed")
print("deformed twist maps:", deformed)
assert deformed == [((1, 0), (0, 1))], deformed  # identity only
undeformed = enumerate_twist_maps("undeformed")
print("undeformed twist maps:", undeformed)
assert undeformed == [((0, 0), (0, 0))], undeformed  # zero only

# unknot (single loop): complex = V in degree 0, homology dim 2
u1 = parse_diagram("rp2diagram v1\nboundary 0\nloop 0\n")
cx = CubeComplex(u1)
print("u1 dims:", {h: cx.dim(h) for h in cx.h_range}, "homology:", cx.homology())
assert cx.homology() == {0: 2}

# two-pass unknot: same answer through the wall
u2 = parse_diagram(
    "rp2diagram v1\nboundary 4\nendpoint 0 0\nendpoint 1 0\nendpoint 2 1\nendpoint 3 1\n"
)
cx = CubeComplex(u2)
print("u2 homology:", cx.homology())
assert cx.homology() == {0: 2}

# essential pair: one crossing between two essential strands; homology vanishes
ep = parse_diagram(
    "rp2diagram v1\nboundary 4\ncrossing 0 0 1 2 3\n"
    "endpoint 0 0\nendpoint 1 1\nendpoint 2 2\nendpoint 3 3\n"
)
cx = CubeComplex(ep)
print("ep normalized:", cx.normalized, "dims:", {h: cx.dim(h) for h in cx.h_range})
print("ep homology:", cx.homology())
assert cx.normalized is False
assert cx.homology() == {0: 0, 1: 0}

# right trefoil
tr = Diagram(
    boundary=0,
    crossings={0: (5, 1, 0, 4), 1: (1, 3, 2, 0), 2: (3, 5, 4, 2)},
    endpoints={},
    loops=[],
)
cx = CubeComplex(tr)
print("trefoil n+/n-:", cx.n_plus, cx.n_minus)
print("trefoil dims:", {h: cx.dim(h) for h in cx.h_range})
cx.filtration_check()
print("trefoil homology:", cx.homology())
assert cx.homology()[0] == 2
graded = cx.graded_homology()
print("trefoil graded homology:", graded)
# Khovanov homology of the right trefoil over F2:
# (h,q): (0,1),(0,3),(2,5),(2,7),(3,7),(3,9)
expect = {(0, 1): 1, (0, 3): 1, (2, 5): 1, (2, 7): 1, (3, 7): 1, (3, 9): 1}
assert graded == expect, graded
print("ALL CHAIN SMOKE TESTS PASSED")
