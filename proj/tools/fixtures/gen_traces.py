#!/usr/bin/env python3
"""Writes the scripted Reidemeister traces used by the replay tests.

Each trace is a diagram plus a stream of drag commands. The diagrams are built here
with crossing times from gen_fixtures' brute-force intersector; the expected events
are asserted by the C++ tests, and the golden logs are the reviewed replay output.

    python3 tools/fixtures/gen_traces.py [--root .]
"""

import argparse
import json
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(__file__))
from gen_fixtures import (brute_force_crossings, catmull_rom, doc, line_segment, local,  # noqa: E402
                          orthogonal_fixture, pd_link, seg_hit)


def trefoil(th):
    return np.array([math.sin(th) + 2 * math.sin(2 * th), math.cos(th) - 2 * math.cos(2 * th)])


def rotate(p, deg):
    a = math.radians(deg)
    c, s = math.cos(a), math.sin(a)
    return np.array([c * p[0] - s * p[1], s * p[0] + c * p[1]])


def schedule(start, stop, fine_lo, fine_hi, coarse, fine):
    """Values from start to stop: coarse steps outside [fine_lo, fine_hi], fine inside."""
    out, x = [], start
    sgn = 1.0 if stop > start else -1.0
    while (stop - x) * sgn > 1e-9:
        inside = min(fine_lo, fine_hi) <= x <= max(fine_lo, fine_hi)
        x = x + sgn * (fine if inside else coarse)
        if (x - stop) * sgn > 0:
            x = stop
        out.append(x)
    return out


def drag(node, points):
    return [{"kind": "DragNode", "node": node, "to": [float(p[0]), float(p[1])]} for p in points]


def write(path, diagram, commands, config=None):
    d = dict(diagram)
    d["commands"] = commands
    if config:
        d["config"] = config
    with open(path, "w") as f:
        json.dump(d, f, indent=1)
        f.write("\n")


# ---------------------------------------------------------------------------
# two trefoil shapes joined at a lobe: the left one alternating (a trefoil), the right
# one with a crossing flipped (an unknot), so the whole is a trefoil

SCALE = 50.0
LEFT = np.array([200.0, 250.0])
AXIS_X = LEFT[0] + 3.6 * SCALE


class Composite:
    def __init__(self):
        thetas = [math.pi / 3 + k * math.pi / 6 for k in range(1, 12)]
        left = [LEFT + SCALE * rotate(trefoil(th), -30) for th in thetas]
        right = [np.array([2 * AXIS_X - p[0], p[1]]) for p in left][::-1]
        bridge_lo = (left[-1] + right[0]) / 2
        bridge_hi = (right[-1] + left[0]) / 2
        self.points = left + [bridge_lo] + right + [bridge_hi]
        # (piece, theta) per anchor; pieces: 0 left, 1 right, None bridge
        self.meta = [(0, th) for th in thetas] + [(None, None)] + [(1, th) for th in thetas[::-1]] + [(None, None)]
        self.segs = catmull_rom(self.points)
        self.bridge_lo = len(left)
        self.bridge_hi = len(self.points) - 1
        # inner arc of each shape whose midpoint faces the joining lobe
        self.left_arc = thetas.index(4 * math.pi / 3)
        self.right_arc = self.bridge_lo + 1 + thetas[::-1].index(4 * math.pi / 3)

    def theta_at(self, t):
        n = len(self.points)
        k, u = local(self.segs, t)
        (pa, ta), (pb, tb) = self.meta[k], self.meta[(k + 1) % n]
        assert pa is not None and pa == pb, "crossing on a bridge"
        if abs(tb - ta) > math.pi:
            tb += 2 * math.pi if tb < ta else -2 * math.pi
        return pa, ta + u * (tb - ta)

    def diagram(self):
        crossings = []
        for t, s in brute_force_crossings(self.segs):
            pt, tht = self.theta_at(t)
            ps, ths = self.theta_at(s)
            assert pt == ps
            over = -math.sin(3 * tht) > -math.sin(3 * ths)
            crossings.append([t, s, over, pt])
        assert len(crossings) == 6, len(crossings)
        right = [c for c in crossings if c[3] == 1]
        # flip the right shape's crossing nearest the joining lobe
        right.sort(key=lambda c: -self.location(c[0])[0])
        right[-1][2] = not right[-1][2]
        return doc(self.segs, [(t, s, o) for t, s, o, _ in crossings])

    def location(self, t):
        from gen_fixtures import bezier
        k, u = local(self.segs, t)
        return bezier(self.segs[k], u)


def r3_commands(comp, node, toward_right):
    """Slides the inner arc through the opposite crossing of its shape."""
    p = comp.points[node]
    piece = 0 if node < comp.bridge_lo else 1
    # the opposite crossing sits on the arc's horizontal line
    vertex = min((comp.location(t) for t, s in brute_force_crossings(comp.segs) if comp.theta_at(t)[0] == piece),
                 key=lambda q: abs(q[1] - p[1]))
    centre_x = LEFT[0] if piece == 0 else 2 * AXIS_X - LEFT[0]
    stop_x = centre_x + (1 if toward_right else -1) * 2.3 * SCALE
    xs = schedule(p[0], stop_x, vertex[0] - 12.0, vertex[0] + 12.0, 7.3, 0.29)
    return drag(node, [(x, p[1]) for x in xs])


def r2_commands(comp, depth, back):
    """Pushes the lower bridge anchor up across the upper bridge (and optionally back)."""
    mover = comp.points[comp.bridge_hi]
    fixed = comp.points[comp.bridge_lo]
    sgn = 1.0 if fixed[1] > mover[1] else -1.0
    there = schedule(mover[1], fixed[1] + sgn * depth, fixed[1] - 6.0, fixed[1] + 6.0, 6.1, 0.43)
    cmds = drag(comp.bridge_hi, [(mover[0], y) for y in there])
    if back:
        again = schedule(there[-1], mover[1], fixed[1] - 6.0, fixed[1] + 6.0, 6.1, 0.43)
        cmds += drag(comp.bridge_hi, [(mover[0], y) for y in again])
    return cmds


# ---------------------------------------------------------------------------
# smooth trefoil with a kink pulled out of one lobe

def r1_trace():
    thetas = [math.pi / 3 + k * math.pi / 6 for k in range(12)]
    pts = [np.array([250.0, 250.0]) + 60.0 * trefoil(th) for th in thetas]
    segs = catmull_rom(pts)
    crossings = []
    for t, s in brute_force_crossings(segs):
        th_t, th_s = math.pi / 3 + t * 2 * math.pi, math.pi / 3 + s * 2 * math.pi
        crossings.append((t, s, -math.sin(3 * th_t) > -math.sin(3 * th_s)))
    assert len(crossings) == 3
    diagram = doc(segs, crossings)

    # segment 0 starts at a lobe tip; cross its handles over each other to tie a kink
    p0, c0, c1, p1 = segs[0]
    chord = p1 - p0
    normal = np.array([chord[1], -chord[0]])
    normal /= np.linalg.norm(normal)
    if np.dot(normal, p0 - np.array([250.0, 250.0])) < 0:
        normal = -normal
    L = np.linalg.norm(chord)
    cmds = []
    target_out = p0 + 1.6 * chord + 0.9 * L * normal
    target_in = p1 - 1.6 * chord + 0.9 * L * normal
    for k in range(1, 16):
        a = k / 15
        q = (1 - a) * c0 + a * target_out
        cmds.append({"kind": "DragHandle", "node": 0, "side": "out", "to": [float(q[0]), float(q[1])]})
    for k in range(1, 16):
        a = k / 15
        q = (1 - a) * c1 + a * target_in
        cmds.append({"kind": "DragHandle", "node": 1, "side": "in", "to": [float(q[0]), float(q[1])]})
    return diagram, cmds


# ---------------------------------------------------------------------------
# orthogonal trefoil whose seam sits on a straight strand just past a crossing

def loop_trace():
    import spherogram

    segs, crossings = orthogonal_fixture(spherogram.Link("K3a1"))
    n = len(segs)
    # a crossing and the arrow carrying it, away from the arrow's ends
    best = None
    for t, s, _ in crossings:
        for time in (t, s):
            k, u = local(segs, time)
            if 0.3 < u < 0.7:
                best = (k, u)
                break
        if best:
            break
    k, u = best
    p, q = segs[k][0], segs[k][3]
    cut = p + (u + 0.2) * (q - p)
    pts = []
    for i in range(n):
        pts.append(segs[(k + 1 + i) % n][0])
    # seam at the cut: [cut -> q] first, then the rest, then [p -> cut] last
    chain = [cut] + pts[:-1] + [p]
    new_segs = [line_segment(chain[i], chain[(i + 1) % len(chain)]) for i in range(len(chain))]

    # booleans follow the over arrows of the original layout
    over_points = []
    for t, s, over_first in crossings:
        o = t if over_first else s
        ko, uo = local(segs, o)
        d = segs[ko][3] - segs[ko][0]
        over_points.append((segs[ko][0] + uo * d, d / np.linalg.norm(d)))
    out = []
    for t, s in brute_force_crossings(new_segs, samples=8):
        kt, ut = local(new_segs, t)
        dt = new_segs[kt][3] - new_segs[kt][0]
        loc = new_segs[kt][0] + ut * dt
        (op, od), = [(a, b) for a, b in over_points if np.linalg.norm(a - loc) < 1e-6]
        over_first = abs(abs(np.dot(dt / np.linalg.norm(dt), od)) - 1) < 1e-9
        out.append((t, s, over_first))
    assert len(out) == 3
    diagram = doc(new_segs, out)

    # drag the seam anchor backwards along the strand, across the crossing
    stop = p + (u - 0.2) * (q - p)
    xs = np.linspace(0.0, 1.0, 33)[1:]
    cmds = drag(0, [cut + a * (stop - cut) for a in xs])
    return diagram, cmds


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=os.path.join(os.path.dirname(__file__), "..", ".."))
    args = ap.parse_args()
    out = os.path.join(os.path.abspath(args.root), "tests", "fixtures", "traces")
    os.makedirs(out, exist_ok=True)

    comp = Composite()
    diagram = comp.diagram()
    with open(os.path.join(out, "..", "composite.json"), "w") as f:
        json.dump(diagram, f, indent=1)
        f.write("\n")

    write(os.path.join(out, "legal_r3.json"), diagram, r3_commands(comp, comp.right_arc, toward_right=True))
    write(os.path.join(out, "illegal_r3.json"), diagram, r3_commands(comp, comp.left_arc, toward_right=False))
    write(os.path.join(out, "legal_r2.json"), diagram, r2_commands(comp, 25.0, back=True))
    poke = r2_commands(comp, 25.0, back=False)
    pull = r2_commands(comp, 25.0, back=True)[len(poke):]
    write(os.path.join(out, "illegal_r2.json"), diagram, poke + [{"kind": "FlipCrossing", "crossing": 3}] + pull)

    d, cmds = r1_trace()
    write(os.path.join(out, "legal_r1.json"), d, cmds)
    d, cmds = loop_trace()
    write(os.path.join(out, "loop_around.json"), d, cmds)
    print("traces written to", out)


if __name__ == "__main__":
    sys.exit(main())
