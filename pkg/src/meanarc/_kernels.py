"""JIT batch kernel for placement evaluation.

This mirrors arcs.clip_boundary placement by placement but returns only the
per-placement scalars the estimators need: inside length, crossing count,
classification code, degenerate flag. Domain edges are indexed on a uniform
grid so each trajectory edge tests O(1) candidates instead of every edge.
A consistency test pins this against clip_boundary; keep the two in sync.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

CLS_DISJOINT = 0
CLS_CROSSING = 1
CLS_CONTAINED = 2  # trajectory inside domain
CLS_COVERING = 3  # domain inside trajectory

MAX_CROSSINGS = 2048


def build_domain_index(dom: np.ndarray, eps: float):
    """Uniform grid over the domain edges, as flat CSR arrays."""
    a = dom
    b = np.roll(dom, -1, axis=0)
    lo = np.minimum(a, b) - eps
    hi = np.maximum(a, b) + eps
    gmin = lo.min(axis=0)
    gmax = hi.max(axis=0)
    sx = max(float(gmax[0] - gmin[0]), 1e-12)
    sy = max(float(gmax[1] - gmin[1]), 1e-12)
    ne = len(a)
    total = 2.0 * ne
    nx = int(np.clip(round(math.sqrt(total * sx / sy)), 1, 128))
    ny = int(np.clip(round(math.sqrt(total * sy / sx)), 1, 128))
    cellx = sx / nx
    celly = sy / ny
    ix0 = np.clip(((lo[:, 0] - gmin[0]) / cellx).astype(np.int64), 0, nx - 1)
    ix1 = np.clip(((hi[:, 0] - gmin[0]) / cellx).astype(np.int64), 0, nx - 1)
    iy0 = np.clip(((lo[:, 1] - gmin[1]) / celly).astype(np.int64), 0, ny - 1)
    iy1 = np.clip(((hi[:, 1] - gmin[1]) / celly).astype(np.int64), 0, ny - 1)
    cells = []
    items = []
    for j in range(ne):
        for cy in range(iy0[j], iy1[j] + 1):
            for cx in range(ix0[j], ix1[j] + 1):
                cells.append(cy * nx + cx)
                items.append(j)
    cells = np.asarray(cells, dtype=np.int64)
    items = np.asarray(items, dtype=np.int64)
    order = np.argsort(cells, kind="stable")
    cells = cells[order]
    items = items[order]
    starts = np.zeros(nx * ny + 1, dtype=np.int64)
    np.add.at(starts, cells + 1, 1)
    starts = np.cumsum(starts)
    return (
        float(gmin[0]),
        float(gmin[1]),
        cellx,
        celly,
        nx,
        ny,
        starts,
        np.ascontiguousarray(items),
    )


@njit(cache=True, nogil=True, inline="always")
def _point_seg_dist2(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    rx = px - ax
    ry = py - ay
    len2 = dx * dx + dy * dy
    if len2 <= 0.0:
        return rx * rx + ry * ry
    t = (rx * dx + ry * dy) / len2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    fx = rx - t * dx
    fy = ry - t * dy
    return fx * fx + fy * fy


@njit(cache=True, nogil=True, inline="always")
def _segs_close(ax, ay, bx, by, cx, cy, dx, dy, eps):
    e2 = eps * eps
    if _point_seg_dist2(cx, cy, ax, ay, bx, by) <= e2:
        return True
    if _point_seg_dist2(dx, dy, ax, ay, bx, by) <= e2:
        return True
    if _point_seg_dist2(ax, ay, cx, cy, dx, dy) <= e2:
        return True
    return _point_seg_dist2(bx, by, cx, cy, dx, dy) <= e2


@njit(cache=True, nogil=True)
def _locate(px, py, verts, eps):
    """0 outside, 1 inside, 2 on boundary; same rules as geometry.locate_points."""
    n = verts.shape[0]
    inside = False
    eps2 = eps * eps
    for i in range(n):
        ax = verts[i, 0]
        ay = verts[i, 1]
        i1 = i + 1 if i + 1 < n else 0
        bx = verts[i1, 0]
        by = verts[i1, 1]
        if _point_seg_dist2(px, py, ax, ay, bx, by) <= eps2:
            return 2
        if (ay > py) != (by > py):
            xs = ax + (py - ay) * (bx - ax) / (by - ay)
            if px < xs:
                inside = not inside
    return 1 if inside else 0


@njit(cache=True, nogil=True)
def _batch_clip(
    dom,
    gminx,
    gminy,
    cellx,
    celly,
    nx,
    ny,
    starts,
    items,
    traj,
    cum,
    motions,
    eps_len,
    eps_param,
    out_s,
    out_n,
    out_cls,
    out_degen,
):
    nt = traj.shape[0]
    nd = dom.shape[0]
    perim = cum[nt]
    W = np.empty((nt, 2))
    ells = np.empty(MAX_CROSSINGS)
    stamp = np.zeros(nd, dtype=np.int64)
    tick = 0

    for p in range(motions.shape[0]):
        th = motions[p, 0]
        txp = motions[p, 1]
        typ = motions[p, 2]
        co = math.cos(th)
        si = math.sin(th)
        for i in range(nt):
            W[i, 0] = co * traj[i, 0] - si * traj[i, 1] + txp
            W[i, 1] = si * traj[i, 0] + co * traj[i, 1] + typ

        degen = False
        ncross = 0
        for i in range(nt):
            x0 = W[i, 0]
            y0 = W[i, 1]
            i1 = i + 1 if i + 1 < nt else 0
            x1 = W[i1, 0]
            y1 = W[i1, 1]
            d1x = x1 - x0
            d1y = y1 - y0
            len1 = math.hypot(d1x, d1y)
            bxlo = (x0 if x0 < x1 else x1) - eps_len
            bxhi = (x0 if x0 > x1 else x1) + eps_len
            bylo = (y0 if y0 < y1 else y1) - eps_len
            byhi = (y0 if y0 > y1 else y1) + eps_len
            cx0 = int(math.floor((bxlo - gminx) / cellx))
            cx1 = int(math.floor((bxhi - gminx) / cellx))
            cy0 = int(math.floor((bylo - gminy) / celly))
            cy1 = int(math.floor((byhi - gminy) / celly))
            if cx1 < 0 or cx0 >= nx or cy1 < 0 or cy0 >= ny:
                continue
            if cx0 < 0:
                cx0 = 0
            if cy0 < 0:
                cy0 = 0
            if cx1 >= nx:
                cx1 = nx - 1
            if cy1 >= ny:
                cy1 = ny - 1
            tick += 1
            for cy in range(cy0, cy1 + 1):
                base = cy * nx
                for cx in range(cx0, cx1 + 1):
                    cell = base + cx
                    for kk in range(starts[cell], starts[cell + 1]):
                        j = items[kk]
                        if stamp[j] == tick:
                            continue
                        stamp[j] = tick
                        bx0 = dom[j, 0]
                        by0 = dom[j, 1]
                        j1 = j + 1 if j + 1 < nd else 0
                        bx1 = dom[j1, 0]
                        by1 = dom[j1, 1]
                        if (
                            (bx0 if bx0 < bx1 else bx1) > bxhi
                            or (bx0 if bx0 > bx1 else bx1) < bxlo
                            or (by0 if by0 < by1 else by1) > byhi
                            or (by0 if by0 > by1 else by1) < bylo
                        ):
                            continue
                        d2x = bx1 - bx0
                        d2y = by1 - by0
                        denom = d1x * d2y - d1y * d2x
                        len2 = math.hypot(d2x, d2y)
                        qx = bx0 - x0
                        qy = by0 - y0
                        if abs(denom) <= eps_len * (len1 + len2):
                            if _segs_close(x0, y0, x1, y1, bx0, by0, bx1, by1, eps_len):
                                degen = True
                            continue
                        t = (qx * d2y - qy * d2x) / denom
                        u = (qx * d1y - qy * d1x) / denom
                        dt = eps_len / len1
                        if dt < eps_param:
                            dt = eps_param
                        du = eps_len / len2
                        if du < eps_param:
                            du = eps_param
                        if t < -dt or t > 1.0 + dt or u < -du or u > 1.0 + du:
                            continue
                        if dt < t < 1.0 - dt and du < u < 1.0 - du:
                            if ncross < MAX_CROSSINGS:
                                ells[ncross] = cum[i] + t * len1
                            ncross += 1
                        else:
                            degen = True

        if ncross > MAX_CROSSINGS:
            degen = True
            ncross = MAX_CROSSINGS

        if ncross == 0:
            code = _locate(W[0, 0], W[0, 1], dom, eps_len)
            if code == 2:
                out_s[p] = 0.0
                out_cls[p] = CLS_DISJOINT
                degen = True
            elif code == 1:
                out_s[p] = perim
                out_cls[p] = CLS_CONTAINED
            else:
                code = _locate(dom[0, 0], dom[0, 1], W, eps_len)
                out_s[p] = 0.0
                if code == 2:
                    out_cls[p] = CLS_DISJOINT
                    degen = True
                elif code == 1:
                    out_cls[p] = CLS_COVERING
                else:
                    out_cls[p] = CLS_DISJOINT
        else:
            if ncross % 2 == 1:
                degen = True
            # insertion sort of the crossing positions
            for a in range(1, ncross):
                key = ells[a]
                b = a - 1
                while b >= 0 and ells[b] > key:
                    ells[b + 1] = ells[b]
                    b -= 1
                ells[b + 1] = key
            sval = 0.0
            first_inside = -1
            prev_inside = -1
            for k in range(ncross):
                la = ells[k]
                lb = ells[k + 1] if k + 1 < ncross else ells[0] + perim
                plen = lb - la
                lmid = la + 0.5 * plen
                if lmid >= perim:
                    lmid -= perim
                # binary search for the edge containing lmid
                lo = 0
                hi = nt + 1
                while lo < hi:
                    mid = (lo + hi) // 2
                    if cum[mid] <= lmid:
                        lo = mid + 1
                    else:
                        hi = mid
                e = lo - 1
                if e > nt - 1:
                    e = nt - 1
                e1 = e + 1 if e + 1 < nt else 0
                seg = cum[e + 1] - cum[e]
                frac = (lmid - cum[e]) / seg
                px = W[e, 0] + frac * (W[e1, 0] - W[e, 0])
                py = W[e, 1] + frac * (W[e1, 1] - W[e, 1])
                code = _locate(px, py, dom, eps_len)
                if code == 2:
                    degen = True
                ins = 1 if code == 1 else 0
                if k > 0 and ins == prev_inside:
                    degen = True
                if k == 0:
                    first_inside = ins
                prev_inside = ins
                if ins == 1:
                    sval += plen
            if prev_inside == first_inside and ncross >= 2:
                degen = True
            out_s[p] = sval
            out_cls[p] = CLS_CROSSING
        out_n[p] = ncross
        out_degen[p] = degen


class ClipKernel:
    """Per-pair state (vertex arrays, cumulative lengths, edge grid) plus a
    vectorized run() over motion rows."""

    def __init__(self, domain_verts: np.ndarray, trajectory_verts: np.ndarray, eps_len: float, eps_param: float = 1e-12):
        self.dom = np.ascontiguousarray(domain_verts, dtype=np.float64)
        self.traj = np.ascontiguousarray(trajectory_verts, dtype=np.float64)
        d = np.roll(self.traj, -1, axis=0) - self.traj
        lens = np.hypot(d[:, 0], d[:, 1])
        self.cum = np.concatenate([[0.0], np.cumsum(lens)])
        self.perimeter = float(self.cum[-1])
        self.eps_len = float(eps_len)
        self.eps_param = float(eps_param)
        self._grid = build_domain_index(self.dom, self.eps_len)

    def run(self, motions: np.ndarray):
        """Evaluate (n, 3) motion rows; returns (s, n, cls, degenerate)."""
        motions = np.ascontiguousarray(motions, dtype=np.float64)
        m = len(motions)
        out_s = np.empty(m)
        out_n = np.empty(m, dtype=np.int64)
        out_cls = np.empty(m, dtype=np.int8)
        out_degen = np.zeros(m, dtype=np.bool_)
        gx, gy, cellx, celly, nx, ny, starts, items = self._grid
        _batch_clip(
            self.dom,
            gx,
            gy,
            cellx,
            celly,
            nx,
            ny,
            starts,
            items,
            self.traj,
            self.cum,
            motions,
            self.eps_len,
            self.eps_param,
            out_s,
            out_n,
            out_cls,
            out_degen,
        )
        return out_s, out_n, out_cls, out_degen
