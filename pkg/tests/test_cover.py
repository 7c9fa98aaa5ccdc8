"""Label placement, tangents, and anchor-group extraction, against line-scan oracles."""

import pytest

from planesched.cover import (
    build_cover,
    build_cover_with_stats,
    check_no_three_collinear,
    check_unique_tangent,
    place_s_points,
    s_indices_on_line,
    tangent_line,
    vertex_line,
)
from planesched.plane import (
    ALPHA,
    GAMMA,
    Line,
    alpha_point,
    build_plane,
    gamma_point,
    line_contains,
    line_points,
)

PRIMES_TO_47 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def brute_force_groups(pi: int, n: int) -> dict:
    """Oracle: per anchor, classify every line by direct point-by-point scans."""
    plane = build_plane(pi)
    s = place_s_points(pi)
    s_set = set(s)
    groups = {}
    for anchor in plane.points:
        if anchor in s_set:
            continue
        members = []
        for line in plane.lines:
            if not line_contains(line, anchor, pi):
                continue
            hits = [k for k, pt in enumerate(s) if line_contains(line, pt, pi)]
            if len(hits) == 2 and hits[1] < n:
                members.append((hits[0], hits[1]))
            elif len(hits) == 1 and hits[0] < n:
                members.append((hits[0], hits[0]))
        groups[anchor] = tuple(sorted(members))
    return groups


def test_placement_reference_coordinates():
    s = place_s_points(5)
    assert s == [
        gamma_point(0, 0),
        gamma_point(1, 1),
        gamma_point(2, 4),
        gamma_point(3, 4),
        gamma_point(4, 1),
        alpha_point(),
    ]
    assert place_s_points(2) == [gamma_point(0, 0), gamma_point(1, 1), alpha_point()]
    assert place_s_points(3)[2] == gamma_point(2, 1)


def test_vertex_line_secant_with_scan_oracle():
    s = place_s_points(5)
    line = vertex_line((0, 2), s)
    assert line == Line(GAMMA, i=2, j=0)
    plane = build_plane(5)
    scan = [
        l
        for l in plane.lines
        if line_contains(l, s[0], 5) and line_contains(l, s[2], 5)
    ]
    assert scan == [line]


def test_vertex_line_tangents():
    s = place_s_points(5)
    assert vertex_line((5, 5), s) == Line(ALPHA)
    assert vertex_line((1, 1), s) == Line(GAMMA, i=2, j=4)
    # oracle: a tangent meets the label set exactly once
    for k in range(6):
        line = vertex_line((k, k), s)
        assert sum(line_contains(line, pt, 5) for pt in s) == 1
        assert line_contains(line, s[k], 5)


def test_reference_anchor_group_order_five():
    cliques = build_cover(5)
    by_anchor = {c.anchor: c.members for c in cliques}
    assert by_anchor[gamma_point(4, 3)] == ((0, 2), (1, 3), (4, 5))
    # second anchor, cross-checked against the scan oracle below
    assert by_anchor[gamma_point(0, 1)] == ((0, 5), (1, 4), (2, 2), (3, 3))
    oracle = brute_force_groups(5, 6)
    assert by_anchor[gamma_point(0, 1)] == oracle[gamma_point(0, 1)]


def test_cover_counts_and_flags():
    assert len(build_cover(2)) == 4
    for pi in (2, 3, 5, 7):
        cliques = build_cover(pi)
        assert len(cliques) == pi * pi
        assert all(len(c.members) <= pi + 1 for c in cliques)
        assert all(c.flagged == (len(c.members) < 2) for c in cliques)


def test_cover_matches_scan_oracle():
    for pi, n in [(2, 3), (3, 4), (5, 6), (7, 8), (5, 5), (7, 6), (2, 2)]:
        oracle = brute_force_groups(pi, n)
        for clique in build_cover(pi, n):
            assert clique.members == oracle[clique.anchor]


def test_anchors_never_on_the_label_set():
    for pi in (2, 3, 5, 7, 11):
        s = set(place_s_points(pi))
        assert all(c.anchor not in s for c in build_cover(pi))


def test_group_members_are_index_disjoint():
    for pi, n in [(2, 3), (3, 4), (5, 6), (7, 8), (11, 12), (13, 14), (5, 5)]:
        for clique in build_cover(pi, n):
            seen: set[int] = set()
            for p, q in clique.members:
                indices = {p, q}
                assert not (seen & indices)
                seen |= indices


def test_distinct_vertices_get_distinct_lines():
    for pi in (2, 3, 5, 7, 11, 13):
        s = place_s_points(pi)
        vertices = [(l, lp) for l in range(pi + 1) for lp in range(l, pi + 1)]
        lines = [vertex_line(v, s) for v in vertices]
        assert len(set(lines)) == len(lines)


def test_tangent_closed_form_matches_scan():
    for pi in (2, 3, 5, 7, 11):
        plane = build_plane(pi)
        s = place_s_points(pi)
        s_set = set(s)
        for k in range(pi + 1):
            scan = [
                l
                for l in plane.lines_through(s[k])
                if sum(pt in s_set for pt in line_points(l, pi)) == 1
            ]
            assert scan == [tangent_line(k, pi)]


def test_s_indices_on_line_matches_scan():
    for pi in (2, 3, 5, 7):
        plane = build_plane(pi)
        s = place_s_points(pi)
        for line in plane.lines:
            hits = tuple(k for k, pt in enumerate(s) if line_contains(line, pt, pi))
            got = s_indices_on_line(line, pi)
            if len(hits) == 2:
                assert got == hits
            elif len(hits) == 1:
                assert got == (hits[0], hits[0])
            else:
                assert got == ()


def test_no_three_collinear_all_small_primes():
    for pi in PRIMES_TO_47:
        assert check_no_three_collinear(pi)


def test_unique_tangent_all_small_primes():
    for pi in PRIMES_TO_47:
        assert check_unique_tangent(pi)


def test_construction_cost_scales_cubically():
    counts = {}
    for n in (4, 6, 8, 12, 14):
        _, stats = build_cover_with_stats(n - 1, n)
        counts[n] = stats["lines_inspected"]
    for n, count in counts.items():
        assert count <= n**3
        assert count >= 0.3 * n**3


def test_bad_truncation_rejected():
    with pytest.raises(ValueError):
        build_cover(5, 8)
    with pytest.raises(ValueError):
        build_cover(5, 1)
