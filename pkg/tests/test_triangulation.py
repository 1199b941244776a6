import pytest

from discpack import (
    build_complex,
    hex_ball,
    hex_ball_vertex_count,
    neighbors_cyclic,
    read_cpx,
    star,
    write_cpx,
)
from discpack.errors import (
    DanglingVertex,
    Disconnected,
    FormatError,
    InvalidDegree,
    InvalidFace,
    NonManifoldEdge,
    NotADisc,
    OrientationConflict,
    UnknownVertex,
)


def hex_ball_vertices_bruteforce(n):
    """Count lattice points with hex distance <= n via cube coordinates."""
    count = 0
    for x in range(-n, n + 1):
        for y in range(-n, n + 1):
            z = -x - y
            if max(abs(x), abs(y), abs(z)) <= n:
                count += 1
    return count


def torus_faces():
    """3x3 grid with wraparound: a consistently oriented torus (Euler 0)."""
    def vid(i, j):
        return 3 * (i % 3) + (j % 3)
    faces = []
    for i in range(3):
        for j in range(3):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return faces


def test_single_triangle():
    K = build_complex([(0, 1, 2)])
    assert K.vertex_count == 3
    assert K.edge_count == 3
    assert K.face_count == 1
    assert all(K.is_boundary(v) for v in range(3))


def test_star_counts():
    K = star(6)
    assert K.vertex_count == 7
    assert K.face_count == 6
    assert K.interior_vertices == (0,)
    K3 = star(3)
    assert (K3.vertex_count, K3.face_count) == (4, 3)
    K12 = star(12)
    assert (K12.vertex_count, K12.face_count) == (13, 12)
    assert K12.degree(0) == 12


def test_star_rejects_small_degree():
    with pytest.raises(InvalidDegree):
        star(2)


def test_torus_is_not_a_disc():
    with pytest.raises(NotADisc):
        build_complex(torus_faces())


def test_sphere_is_not_a_disc():
    with pytest.raises(NotADisc):
        build_complex([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def test_non_manifold_edge():
    with pytest.raises(NonManifoldEdge):
        build_complex([(0, 1, 2), (1, 0, 3), (0, 1, 4)])


def test_orientation_conflict():
    with pytest.raises(OrientationConflict):
        build_complex([(0, 1, 2), (0, 1, 3)])


def test_disconnected():
    with pytest.raises(Disconnected):
        build_complex([(0, 1, 2), (3, 4, 5)])


def test_dangling_vertex():
    with pytest.raises(DanglingVertex):
        build_complex([(0, 1, 3)])


def test_pinched_vertex_rejected():
    with pytest.raises(NotADisc):
        build_complex([(0, 1, 2), (0, 3, 4)])


def test_bad_faces():
    with pytest.raises(InvalidFace):
        build_complex([])
    with pytest.raises(InvalidFace):
        build_complex([(0, 0, 1)])
    with pytest.raises(InvalidFace):
        build_complex([(0, 1, 2), (1, 2, 0)])  # same triple twice


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hex_ball_counts(n):
    K = hex_ball(n)
    assert K.vertex_count == 1 + 3 * n * (n + 1)
    assert K.vertex_count == hex_ball_vertex_count(n)
    assert K.vertex_count == hex_ball_vertices_bruteforce(n)
    assert K.face_count == 6 * n * n
    # edge count from the boundary cycle: E = 3V - 3 - b
    b = len(K.boundary_vertices)
    assert b == 6 * n
    assert K.edge_count == 3 * K.vertex_count - 3 - b
    assert K.vertex_count - K.edge_count + K.face_count == 1


def test_hex_ball_one_is_star_six():
    assert hex_ball(1) == star(6)


def test_hex_ball_nesting():
    small = set(hex_ball(2).faces)
    big = set(hex_ball(3).faces)
    assert small <= big


def test_round_trip_build():
    for K in (star(5), hex_ball(2)):
        again = build_complex(K.faces)
        assert again == K
        assert again.links == K.links


def test_face_incidence_totals():
    K = hex_ball(2)
    assert sum(len(K.faces_at_vertex[v]) for v in range(K.vertex_count)) \
        == 3 * K.face_count


def test_boundary_matches_boundary_edges():
    # independent classification: a vertex is boundary iff it lies on an
    # edge contained in exactly one face
    K = hex_ball(2)
    edge_faces = {}
    for a, b, c in K.faces:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            edge_faces[key] = edge_faces.get(key, 0) + 1
    on_boundary = set()
    for (u, v), cnt in edge_faces.items():
        if cnt == 1:
            on_boundary.update((u, v))
    assert on_boundary == set(K.boundary_vertices)


def test_neighbors_cyclic_star():
    K = star(6)
    assert neighbors_cyclic(K, 0) == (1, 2, 3, 4, 5, 6)
    petal = neighbors_cyclic(K, 1)
    assert len(petal) == 3
    assert 0 in petal
    assert petal[1] == 0  # hub in the middle of the path


def test_neighbors_cyclic_hex_ball_inner_ring():
    K = hex_ball(2)
    for v in range(1, 7):
        link = neighbors_cyclic(K, v)
        assert len(link) == 6
        assert not K.is_boundary(v)


def test_neighbors_cyclic_unknown_vertex():
    with pytest.raises(UnknownVertex):
        neighbors_cyclic(star(4), 99)


def test_links_follow_orientation():
    # successor pairs in every link must appear as a face with the vertex
    K = hex_ball(2)
    faces = set(K.faces)

    def canon(f):
        m = f.index(min(f))
        return f[m:] + f[:m]

    for v in K.interior_vertices:
        link = neighbors_cyclic(K, v)
        for i, u in enumerate(link):
            w = link[(i + 1) % len(link)]
            assert canon((v, u, w)) in faces


def test_cpx_round_trip(tmp_path):
    K = hex_ball(2)
    path = tmp_path / "ball.cpx"
    write_cpx(K, path)
    again = read_cpx(path)
    assert again == K
    text = path.read_text()
    assert text.startswith("CPX 1\n")
    assert text.count("\nV ") + text.startswith("V ") == K.vertex_count
    assert text.count("\nF ") == K.face_count


def test_cpx_accepts_comments(tmp_path):
    path = tmp_path / "tri.cpx"
    path.write_text("# a triangle\nCPX 1\nV 0 1\nV 1 1  # rim\nV 2 1\nF 0 1 2\n")
    K = read_cpx(path)
    assert K.vertex_count == 3


def test_cpx_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.cpx"
    path.write_text("CPX 2\nF 0 1 2\n")
    with pytest.raises(FormatError):
        read_cpx(path)


def test_cpx_rejects_wrong_boundary_flag(tmp_path):
    path = tmp_path / "flag.cpx"
    path.write_text("CPX 1\nV 0 0\nV 1 1\nV 2 1\nF 0 1 2\n")
    with pytest.raises(FormatError):
        read_cpx(path)
