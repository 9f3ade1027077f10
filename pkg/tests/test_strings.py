import pytest

from cuspidal.strings import (L, R, BandDescriptor, GradedPolygon, GradedString, InvalidDescriptor, LabelRangeError,
                              SymmetricPolygon, UndirectedPolygon, ZeroEigenvalue, enumerate_bands,
                              enumerate_strings, has_rotational_symmetry, homogeneous_string, make_band,
                              parse_descriptor, pi1, pi2, predicted_socle, reverse, unfold, validate_string)

from oracles import band_count

EXSTRING = GradedString(3, (2, 1, 1, 2, 1, 2), (R, L, R, R, R))

# frozen from oracles.band_count (brute-force necklaces)
BAND_COUNTS_P6 = {1: 21, 2: 20, 3: 20, 4: 23}


def test_permutations():
    assert [pi1(3, i) for i in (1, 2, 3)] == [2, 1, 3]
    assert [pi2(3, i) for i in (1, 2, 3)] == [1, 3, 2]
    assert [pi1(4, i) for i in (1, 2, 3, 4)] == [2, 1, 4, 3]
    assert [pi2(4, i) for i in (1, 2, 3, 4)] == [1, 3, 2, 4]
    assert pi1(1, 1) == 1 and pi2(1, 1) == 1


def test_validate_string_examples():
    assert validate_string(3, [R, L, R, R, R], [2, 1, 1, 2, 1, 2])
    assert validate_string(3, [], [1])
    assert not validate_string(3, [R], [1, 3])


def test_label_range_error_is_distinct():
    with pytest.raises(LabelRangeError):
        validate_string(3, [R], [1, 4])
    with pytest.raises(LabelRangeError):
        GradedString(2, (3,), ())
    with pytest.raises(InvalidDescriptor) as exc:
        GradedString(3, (1, 3), (R,))
    assert not isinstance(exc.value, LabelRangeError)


def test_exstring_dims_and_socle():
    assert EXSTRING.dims == (3, 3, 0)
    assert predicted_socle(EXSTRING).layers == ((1, 2), (1, 2), (2,), (1,))


def test_single_vertex_and_homogeneous():
    assert predicted_socle(GradedString(3, (2,), ())).layers == ((2,),)
    x4 = homogeneous_string(2, 1, 4)
    assert x4.labels == (1, 2, 1, 2)
    assert predicted_socle(x4).layers == ((2,), (1,), (2,), (1,))


def test_string_counts():
    # every direction word is valid: n * 2^(k-1) strings with k vertices
    for n in range(1, 5):
        for k in range(1, 7):
            got = len([s for s in enumerate_strings(n, k) if len(s) == k])
            assert got == n * 2 ** (k - 1)


def test_enumerate_small_cases():
    assert [s.to_text() for s in enumerate_strings(1, 1)] == ["string n=1 labels=1 dirs="]
    two = enumerate_strings(2, 2)
    assert len(two) == 6
    assert len([s for s in two if len(s) == 2]) == 4
    counts = [len(enumerate_strings(3, k)) for k in range(1, 6)]
    assert counts == sorted(counts) and len(set(counts)) == len(counts)


def test_enumeration_deterministic():
    a = [s.to_text() for s in enumerate_strings(3, 5)]
    b = [s.to_text() for s in enumerate_strings(3, 5)]
    assert a == b and len(set(a)) == len(a)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_band_counts_match_oracle(n):
    assert len(enumerate_bands(n, 6)) == BAND_COUNTS_P6[n]
    assert band_count(n, 6) == BAND_COUNTS_P6[n]


def test_bands_exist_for_n1():
    bands = enumerate_bands(1, 3)
    assert GradedPolygon(1, (1, 1), (L, R)) in bands
    assert all(p.n == 1 for p in bands)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_band_postconditions(n):
    polys = enumerate_bands(n, 6)
    keys = {(p.labels, p.dirs) for p in polys}
    for p in polys:
        assert p.is_canonical() and p.is_primitive()
        assert R in p.dirs and L in p.dirs
        for q in p.rotations():
            c = q.canonical()
            assert (c.labels, c.dirs) in keys


def test_rotational_symmetry():
    p = GradedPolygon(2, (1, 1, 2), (L, R, R))
    assert not has_rotational_symmetry(p)
    doubled = GradedPolygon(2, p.labels * 2, p.dirs * 2)
    assert has_rotational_symmetry(doubled)
    for q in enumerate_bands(3, 6):
        if len(q.sinks()) == 1:
            assert not has_rotational_symmetry(q)


def test_polygon_errors_distinct():
    with pytest.raises(UndirectedPolygon):
        GradedPolygon(1, (1, 1), (R, R))
    p = GradedPolygon(2, (1, 1, 2), (L, R, R))
    with pytest.raises(ZeroEigenvalue):
        BandDescriptor(p, 0, 1)
    with pytest.raises(SymmetricPolygon):
        BandDescriptor(GradedPolygon(2, p.labels * 2, p.dirs * 2), 1, 1)
    with pytest.raises(InvalidDescriptor):
        BandDescriptor(p.rotate(1), 1, 1)
    with pytest.raises(InvalidDescriptor):
        GradedPolygon(2, (1, 2, 1, 2), (R, L, R, L))


def test_unfold():
    polys = [p for p in enumerate_bands(3, 6) if len(p.sinks()) >= 2]
    assert polys
    for p in polys:
        multisets = set()
        for s in p.sinks():
            u = unfold(p, s)
            assert validate_string(u.n, u.dirs, u.labels)
            assert u.labels[0] == u.labels[-1] == p.labels[s]
            assert len(u) == len(p) + 1
            # gluing the ends back recovers the polygon up to rotation
            assert GradedPolygon(p.n, u.labels[:-1], u.dirs).canonical() == p.canonical()
            multisets.add(tuple(sorted(u.labels[:-1])))
        assert len(multisets) == 1
    p = polys[0]
    non_sink = next(i for i in range(len(p)) if not p.is_sink(i))
    with pytest.raises(InvalidDescriptor):
        unfold(p, non_sink)


def test_unfold_unique_sink():
    for p in enumerate_bands(2, 6):
        if len(p.sinks()) != 1:
            continue
        u = unfold(p, p.sinks()[0])
        interior_sources = [i for i in range(1, len(u) - 1) if u.is_source(i)]
        poly_sources = [i for i in range(len(p)) if p.dirs[i] == R and p.dirs[i - 1] == L]
        assert len(interior_sources) == len(poly_sources) == 1


def test_socle_layer_sizes():
    for s in enumerate_strings(3, 6):
        assert sum(len(layer) for layer in predicted_socle(s).layers) == len(s)
    for p in enumerate_bands(3, 6):
        for r in (1, 2):
            ser = predicted_socle(BandDescriptor(p, 1, r))
            assert sum(len(layer) for layer in ser.layers) == r * len(p)


def test_reverse_is_involution():
    for s in enumerate_strings(3, 5):
        assert reverse(reverse(s)) == s
        assert validate_string(s.n, reverse(s).dirs, reverse(s).labels)


def test_text_round_trip():
    for s in enumerate_strings(3, 4):
        assert parse_descriptor(s.to_text()) == s
    for p in enumerate_bands(2, 5):
        b = BandDescriptor(p, "3/2", 2)
        assert parse_descriptor(b.to_text()) == b
        assert parse_descriptor(p.to_text()) == p
    assert EXSTRING.to_text() == "string n=3 labels=2,1,1,2,1,2 dirs=R,L,R,R,R"


@pytest.mark.parametrize("line", [
    "", "strand n=1 labels=1 dirs=", "string n=1 labels=1", "string n=x labels=1 dirs=",
    "string n=2 labels=1,2 dirs=Q", "string n=2 labels=1,2 dirs=R extra=1", "band n=2 labels=1,1,2 dirs=L,R,R lambda=0",
    "band n=2 labels=1,1,2 dirs=L,R,R lambda=1/0", "string n=2 labels=1,2 dirs=R n=2",
])
def test_parse_errors(line):
    with pytest.raises(InvalidDescriptor):
        parse_descriptor(line)


def test_make_band_canonicalizes():
    b = make_band(2, (1, 2, 1), (R, R, L), lam=2)
    assert b.polygon.is_canonical()
    assert b.lam == 2
