"""Search for a 3-saddle movie wall-twist-1 -> crossingless unknot.

Best-first over frames (saddles + crossing-removing moves), threading the
canonical class and pruning once its image becomes zero.
"""

import heapq
import itertools
import time

from rp3bn.catalog import build
from rp3bn.chain import CubeComplex
from rp3bn.cobord import (
    MovieFrame,
    evaluate_movie,
    format_movie,
    frame_map,
    nonzero_class,
    rmove_sites,
)
from rp3bn.diagram import DiagramError
from rp3bn.invariants import canonical_cycle, canonical_degree
from rp3bn.orient import all_orientations

start = build("wall-twist-1")
o0 = all_orientations(start)[0]
cx0 = CubeComplex(start, o0)
h0 = canonical_degree(cx0, o0)
vec0 = frozenset(canonical_cycle(cx0, o0))


def dkey(d):
    return (
        d.boundary,
        tuple(sorted((c, tuple(t)) for c, t in d.crossings.items())),
        tuple(sorted(d.endpoints.items())),
        tuple(sorted(d.loops)),
    )


def saddle_sites(d):
    arcs = sorted(d.arcs())
    for x in arcs:
        yield (x, 0, x, 1)
        yield (x, 1, x, 0)
    for x, y in itertools.combinations(arcs, 2):
        for px in (0, 1):
            for py in (0, 1):
                yield (x, px, y, py)


def expand(state):
    d, o, h, vec, frames, saddles, cube = state
    moves = []
    if saddles < 3:
        for site in saddle_sites(d):
            moves.append(MovieFrame("saddle", site))
    for kind in ("I-remove", "II-remove", "V-remove"):
        for mv in rmove_sites(d, kind):
            moves.append(MovieFrame("rmove", mv))
    for frame in moves:
        try:
            cm = frame_map(d, frame, o, check="none")
        except DiagramError:
            continue
        nvec = cm.apply(h, vec)
        if not nvec:
            continue
        nh = h + cm.h_shift
        if not nonzero_class(cm.target, nh, nvec):
            continue
        yield (
            cm.target_diagram,
            cm.target.orientation,
            nh,
            nvec,
            frames + [frame],
            saddles + (1 if frame.kind == "saddle" else 0),
            cm.target,
        )


def is_goal(state):
    d, _, _, _, _, saddles, _ = state
    return saddles == 3 and d.n_crossings() == 0 and len(d.components()) == 1


def priority(state):
    d, _, _, _, frames, saddles, _ = state
    return (d.n_crossings() + d.boundary // 2 + (3 - saddles), len(frames))


t0 = time.time()
init = (start, o0, h0, vec0, [], 0, cx0)
heap = [(priority(init), 0, init)]
seen = {(dkey(start), h0, tuple(sorted(vec0)), 0)}
counter = itertools.count(1)
found = None
popped = 0
while heap:
    _, _, state = heapq.heappop(heap)
    popped += 1
    if popped % 200 == 0:
        print(f"... popped {popped}, heap {len(heap)}, t={time.time()-t0:.1f}s")
    if time.time() - t0 > 420:
        print("TIMEOUT")
        break
    for nxt in expand(state):
        key = (dkey(nxt[0]), nxt[2], tuple(sorted(nxt[3])), nxt[5])
        if key in seen:
            continue
        seen.add(key)
        if is_goal(nxt):
            found = nxt
            break
        heapq.heappush(heap, (priority(nxt), next(counter), nxt))
    if found:
        break

if found is None:
    print("no movie found")
    raise SystemExit(1)

frames = found[4]
text = format_movie(frames)
print(f"found in {time.time()-t0:.1f}s, {len(frames)} frames:")
print(text)

for o in all_orientations(start):
    rep = evaluate_movie(start, frames, o, check="light")
    print(
        f"orientation {o.bits}: total={rep['total_degree']} zero={rep['is_zero']} "
        f"matches={rep['canonical_matches']} final_h={rep['final_h']} "
        f"end=({rep['final_diagram'].boundary},{rep['final_diagram'].n_crossings()}cr,"
        f"{len(rep['final_diagram'].components())}comp)"
    )
