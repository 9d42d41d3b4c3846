#!/usr/bin/env python3
"""Builds the knot table and the diagram fixtures.

Needs database_knotinfo and spherogram (installed without its SnapPy extras).
Crossing times are computed here from the geometry on their own, independently of
the C++ detector, so the fixtures double as an oracle for it.

    python3 tools/fixtures/gen_fixtures.py [--root .]
"""

import argparse
import json
import math
import os
import sys

import numpy as np


# ---------------------------------------------------------------------------
# knot table

def knotinfo_rows():
    from database_knotinfo import link_list

    for k in link_list()[1:]:
        try:
            n = int(k["crossing_number"])
        except (TypeError, ValueError):
            continue
        if n > 10:
            continue
        yield k


def alexander_coeffs(k):
    raw = k["alexander_polynomial_vector"]
    if k["name"] == "0_1" or not raw:
        return [1]
    vec = json.loads(raw) if isinstance(raw, str) else raw
    lo, hi, coeffs = vec[0], vec[1], vec[2:]
    assert hi - lo + 1 == len(coeffs), k["name"]
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return coeffs


def write_table(path):
    rows = []
    for k in knotinfo_rows():
        c = alexander_coeffs(k)
        assert abs(sum(c)) == 1, (k["name"], c)
        assert c == c[::-1], (k["name"], c)
        rows.append((k["name"], int(k["crossing_number"]), c))
    rows.sort(key=lambda r: (r[1], int(r[0].split("_")[1])))
    with open(path, "w") as f:
        f.write("# name\tcrossings\talexander (normalized, constant term first)\tknot atlas slug\n")
        f.write("# source: KnotInfo, prime knots through 10 crossings\n")
        for name, n, c in rows:
            f.write(f"{name}\t{n}\t{','.join(map(str, c))}\t{name}\n")
    return rows


# ---------------------------------------------------------------------------
# geometry helpers

def line_segment(p, q):
    p, q = np.asarray(p, float), np.asarray(q, float)
    return [p, p + (q - p) / 3.0, p + 2.0 * (q - p) / 3.0, q]


def bezier(seg, u):
    p0, c0, c1, p1 = seg
    v = 1.0 - u
    return v**3 * p0 + 3 * v * v * u * c0 + 3 * v * u * u * c1 + u**3 * p1


def bezier_d(seg, u):
    p0, c0, c1, p1 = seg
    v = 1.0 - u
    return 3 * v * v * (c0 - p0) + 6 * v * u * (c1 - c0) + 3 * u * u * (p1 - c1)


def cross2(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def seg_hit(a0, a1, b0, b1):
    """Parameters (u, v) where two straight pieces cross, or None."""
    d1, d2 = a1 - a0, b1 - b0
    den = cross2(d1, d2)
    if abs(den) < 1e-14:
        return None
    r = b0 - a0
    u = cross2(r, d2) / den
    v = cross2(r, d1) / den
    if 0.0 <= u < 1.0 and 0.0 <= v < 1.0:
        return u, v
    return None


def brute_force_crossings(segs, samples=400):
    """Dense polyline intersection, then Newton on the exact cubics."""
    n = len(segs)
    pts = []
    for i, s in enumerate(segs):
        for k in range(samples):
            pts.append(((i + k / samples) / n, bezier(s, k / samples)))
    m = len(pts)
    pts.append((1.0, pts[0][1]))
    hits = []
    for i in range(m):
        a0, a1 = pts[i][1], pts[i + 1][1]
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            b0, b1 = pts[j][1], pts[j + 1][1]
            if max(a0[0], a1[0]) < min(b0[0], b1[0]) or max(b0[0], b1[0]) < min(a0[0], a1[0]):
                continue
            if max(a0[1], a1[1]) < min(b0[1], b1[1]) or max(b0[1], b1[1]) < min(a0[1], a1[1]):
                continue
            h = seg_hit(a0, a1, b0, b1)
            if h is None:
                continue
            t = pts[i][0] + h[0] * (pts[i + 1][0] - pts[i][0])
            s = pts[j][0] + h[1] * (pts[j + 1][0] - pts[j][0])
            hits.append(refine(segs, t, s))
    return sorted(hits)


def local(segs, t):
    n = len(segs)
    x = (t % 1.0) * n
    k = min(int(math.floor(x)), n - 1)
    return k, x - k


def refine(segs, t, s):
    n = len(segs)
    for _ in range(30):
        kt, ut = local(segs, t)
        ks, us = local(segs, s)
        r = bezier(segs[kt], ut) - bezier(segs[ks], us)
        ta = bezier_d(segs[kt], ut) * n
        tb = bezier_d(segs[ks], us) * n
        # solve ta*dt - tb*ds = -r
        J = np.array([[ta[0], -tb[0]], [ta[1], -tb[1]]])
        dt, ds = np.linalg.solve(J, -r)
        t, s = t + dt, s + ds
        if abs(dt) + abs(ds) < 1e-16:
            break
    return (t % 1.0, s % 1.0)


def tangent(segs, t):
    k, u = local(segs, t)
    return bezier_d(segs[k], u) * len(segs)


def doc(segs, crossings):
    out = {"version": 1, "segments": [], "crossings": []}
    for s in segs:
        out["segments"].append({key: [float(p[0]), float(p[1])] for key, p in zip(("p0", "c0", "c1", "p1"), s)})
    for t, s, over_first in sorted(crossings):
        if t > s:
            t, s, over_first = s, t, not over_first
        out["crossings"].append({"t": float(t), "s": float(s), "over_first": bool(over_first)})
    out["crossings"].sort(key=lambda c: (c["t"], c["s"]))
    return out


def writhe(segs, crossings):
    w = 0
    for t, s, over_first in crossings:
        o, u = (t, s) if over_first else (s, t)
        w += 1 if cross2(tangent(segs, o), tangent(segs, u)) > 0 else -1
    return w


def catmull_rom(points):
    n = len(points)
    segs = []
    for i in range(n):
        p_prev, p0, p1, p_next = points[i - 1], points[i], points[(i + 1) % n], points[(i + 2) % n]
        segs.append([p0, p0 + (p1 - p_prev) / 6.0, p1 - (p_next - p0) / 6.0, p1])
    return segs


def smooth_fixture(curve, height, anchors, scale, offset, phase=0.5):
    """Closed Catmull-Rom curve through curve(theta) with booleans from height(theta)."""
    thetas = [2 * math.pi * (i + phase) / anchors for i in range(anchors)]
    pts = [np.array(curve(th)) * scale + np.array(offset) for th in thetas]
    segs = catmull_rom(pts)
    crossings = []
    for t, s in brute_force_crossings(segs):
        # anchor i sits at theta_i; global time tracks theta closely enough for a height test
        th_t = 2 * math.pi * (t * anchors + phase) / anchors
        th_s = 2 * math.pi * (s * anchors + phase) / anchors
        crossings.append((t, s, height(th_t) > height(th_s)))
    return segs, crossings


# ---------------------------------------------------------------------------
# orthogonal layouts

def orthogonal_fixture(link, scale=10.0):
    from spherogram.links.orthogonal import OrthogonalLinkDiagram

    verts, arrows, plink_crossings = OrthogonalLinkDiagram(link).plink_data()
    by_start = {a[0]: i for i, a in enumerate(arrows)}
    order = [0]
    while len(order) < len(arrows):
        nxt = by_start[arrows[order[-1]][1]]
        if nxt == order[0]:
            break
        order.append(nxt)
    assert len(order) == len(arrows), "layout is not a single closed chain"
    pos = {i: k for k, i in enumerate(order)}
    n = len(order)
    P = [np.array(v, float) * scale for v in verts]
    segs = [line_segment(P[arrows[i][0]], P[arrows[i][1]]) for i in order]

    crossings = []
    for over, under, *_ in plink_crossings:
        io, iu = pos[over], pos[under]
        ao, bo = P[arrows[over][0]], P[arrows[over][1]]
        au, bu = P[arrows[under][0]], P[arrows[under][1]]
        h = seg_hit(ao, bo, au, bu)
        assert h is not None
        t_over, t_under = (io + h[0]) / n, (iu + h[1]) / n
        crossings.append((t_over, t_under, True))
    return segs, crossings


def pd_link(pd):
    import spherogram

    return spherogram.Link([tuple(x) for x in pd])


def checked_orthogonal(link, expected_abs_writhe=None):
    segs, crossings = orthogonal_fixture(link)
    assert len(crossings) == len(link.crossings)
    numeric = brute_force_crossings(segs, samples=8)
    assert len(numeric) == len(crossings), (len(numeric), len(crossings))
    if expected_abs_writhe is not None:
        assert abs(writhe(segs, crossings)) == expected_abs_writhe
    return segs, crossings


def pd_writhe(link):
    return sum(c.sign for c in link.crossings)


# ---------------------------------------------------------------------------

PERKO_B_PD = [(11, 5, 12, 4), (12, 0, 13, 19), (8, 2, 9, 1), (7, 17, 8, 16), (5, 15, 6, 14),
              (2, 10, 3, 9), (0, 14, 1, 13), (17, 11, 18, 10), (15, 7, 16, 6), (3, 18, 4, 19)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=os.path.join(os.path.dirname(__file__), "..", ".."))
    args = ap.parse_args()
    root = os.path.abspath(args.root)
    fixtures = os.path.join(root, "tests", "fixtures")
    os.makedirs(fixtures, exist_ok=True)
    os.makedirs(os.path.join(root, "data"), exist_ok=True)

    rows = write_table(os.path.join(root, "data", "knot_table.tsv"))
    print(f"knot table: {len(rows)} entries")

    def dump(name, segs, crossings):
        with open(os.path.join(fixtures, name), "w") as f:
            json.dump(doc(segs, crossings), f, indent=1)
            f.write("\n")

    # circle
    k = 0.5522847498307936 * 100
    c = np.array([200.0, 200.0])
    quads = [(np.array([100, 0]), np.array([0, 100])), (np.array([0, 100]), np.array([-100, 0])),
             (np.array([-100, 0]), np.array([0, -100])), (np.array([0, -100]), np.array([100, 0]))]
    segs = []
    for a, b in quads:
        p0, p1 = c + a, c + b
        segs.append([p0, p0 + b / 100.0 * k, p1 + a / 100.0 * k, p1])
    dump("circle.json", segs, [])

    # one-crossing figure-eight curve (two lobes)
    segs, crossings = smooth_fixture(lambda th: (math.cos(th), math.sin(th) * math.cos(th)),
                                     lambda th: 0.0, 8, 150.0, (200.0, 200.0))
    assert len(crossings) == 1
    dump("kink.json", segs, [(crossings[0][0], crossings[0][1], False)])

    # smooth trefoil, alternating, heights from the standard parametrisation; the seam sits
    # between crossings
    segs, crossings = smooth_fixture(lambda th: (math.sin(th) + 2 * math.sin(2 * th), math.cos(th) - 2 * math.cos(2 * th)),
                                     lambda th: -math.sin(3 * th), 12, 60.0, (250.0, 250.0), phase=0.0)
    assert len(crossings) == 3
    dump("trefoil.json", segs, crossings)
    print("trefoil writhe", writhe(segs, crossings))

    knots = {k["name"]: k for k in knotinfo_rows()}

    L = pd_link(json.loads(knots["4_1"]["pd_notation"]))
    segs, crossings = checked_orthogonal(L, abs(pd_writhe(L)))
    dump("figure_eight.json", segs, crossings)

    A = pd_link(json.loads(knots["10_161"]["pd_notation"]))
    segs, crossings = checked_orthogonal(A, abs(pd_writhe(A)))
    dump("perko_a.json", segs, crossings)
    print("perko A writhe", writhe(segs, crossings), "pd", pd_writhe(A))

    B = pd_link(PERKO_B_PD)
    segs, crossings = checked_orthogonal(B, abs(pd_writhe(B)))
    dump("perko_b.json", segs, crossings)
    print("perko B writhe", writhe(segs, crossings), "pd", pd_writhe(B))

    C = A.connected_sum(pd_link(json.loads(knots["10_161"]["pd_notation"])))
    assert len(C.crossings) == 20
    segs, crossings = checked_orthogonal(C, abs(pd_writhe(C)))
    dump("knot20.json", segs, crossings)

    # every tabulated knot with one orthogonal layout
    with open(os.path.join(fixtures, "rolfsen.jsonl"), "w") as f:
        for name, n, coeffs in rows:
            if n == 0:
                continue
            link = pd_link(json.loads(knots[name]["pd_notation"]))
            segs, crossings = checked_orthogonal(link, abs(pd_writhe(link)))
            f.write(json.dumps({"name": name, "diagram": doc(segs, crossings)}) + "\n")
    print("rolfsen layouts written")


if __name__ == "__main__":
    sys.exit(main())
