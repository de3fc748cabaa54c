import functools

import numpy as np
import pytest

from profree import chartable as ct
from profree import groups as gr

from conftest import named, psl2


def brute_classes(g):
    """Conjugacy classes as sorted element lists, by looping over h x h^-1."""
    mul, inv = g.mul.tolist(), g.inv.tolist()
    seen, out = set(), []
    for x in range(g.n):
        if x in seen:
            continue
        orbit = {mul[mul[h][x]][inv[h]] for h in range(g.n)}
        seen |= orbit
        out.append(sorted(orbit))
    return out


def float_degrees(g):
    """Degrees from a floating eigendecomposition of the class algebra.

    The structure constants are counted straight from the table. For a
    central character w (normalised so w_0 = 1) we have
    sum_i |w_i|^2 / |C_i| = n / d^2.
    """
    classes = brute_classes(g)
    k = len(classes)
    class_of = np.empty(g.n, dtype=int)
    for i, c in enumerate(classes):
        class_of[c] = i
    a = np.zeros((k, k, k))
    for l, c in enumerate(classes):
        xs, ys = np.nonzero(g.mul == c[0])
        np.add.at(a[:, :, l], (class_of[xs], class_of[ys]), 1)
    rng = np.random.default_rng(5)
    combo = np.tensordot(rng.standard_normal(k), a, axes=1)
    _, vecs = np.linalg.eig(combo)
    sizes = np.array([len(c) for c in classes])
    degrees = []
    for j in range(k):
        w = vecs[:, j] / vecs[0, j]
        d2 = g.n / np.sum(np.abs(w) ** 2 / sizes)
        degrees.append(int(round(np.sqrt(d2))))
    return sorted(degrees)


@functools.lru_cache(maxsize=None)
def catalog_upto_360():
    out = []
    for n in range(1, 49):
        out += [(f"abelian{fac}", gr.build_abelian(fac)) for fac in gr.abelian_groups_of_order(n)]
    for n in range(6, 49, 2):
        out.append((f"D{n}", gr.build_dihedral(n)))
    for n in range(8, 49, 4):
        out.append((f"Q{n}", gr.build_dicyclic(n)))
    for name in ["S3", "S4", "S5", "A4", "A5"]:
        out.append((name, named(name)))
    out.append(("PSL2(7)", psl2(7)[0]))
    out.append(("A6", gr.build_alternating(6)[0]))
    return out


def test_abelian_classes_are_singletons():
    cc = ct.conjugacy_classes(gr.build_abelian((2, 6)))
    assert cc.sizes == (1,) * 12
    assert cc.class_of.tolist() == list(range(12))


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "S4", "Q12", "D10", "A5"])
def test_classes_match_brute_force(name):
    g = named(name)
    cc = ct.conjugacy_classes(g)
    expected = brute_classes(g)
    got = [sorted(np.flatnonzero(cc.class_of == i).tolist()) for i in range(len(cc))]
    assert got == expected
    assert list(cc.sizes) == [len(c) for c in expected]
    assert cc.reps[0] == 0 and cc.sizes[0] == 1
    assert all(g.n % s == 0 for s in cc.sizes)


def test_s3_and_psl27_class_counts():
    assert sorted(ct.conjugacy_classes(named("S3")).sizes) == [1, 2, 3]
    assert len(ct.conjugacy_classes(psl2(7)[0])) == 6


def test_class_coefficients_identity_row():
    g = named("S4")
    cc = ct.conjugacy_classes(g)
    a = ct.class_coefficients(g, cc)
    # the identity class times C_j is C_j
    assert np.array_equal(a[0], np.eye(len(cc), dtype=np.int64))
    # sum over j of a[i, j, l] counts x in C_i, so equals |C_i|
    assert a.sum(axis=1)[:, 0].tolist() == list(cc.sizes)


def test_dixon_prime():
    # A5: exponent 30, 2 sqrt(60) ~ 15.5, so the first prime 1 mod 30 is 31
    assert ct.dixon_prime(60, 30) == 31
    # S3: exponent 6, p > 4.9 -> 7
    assert ct.dixon_prime(6, 6) == 7
    with pytest.raises(ct.CharacterTableError):
        ct.dixon_prime(10**6, 10**6, limit=10)


@pytest.mark.parametrize(
    "name, degrees",
    [
        ("Z4", (1, 1, 1, 1)),
        ("S3", (1, 1, 2)),
        ("Q8", (1, 1, 1, 1, 2)),
        ("D10", (1, 1, 2, 2)),
        ("A4", (1, 1, 1, 3)),
        ("S4", (1, 1, 2, 3, 3)),
        ("A5", (1, 3, 3, 4, 5)),
    ],
)
def test_known_degrees(name, degrees):
    g = named(name)
    got = ct.character_degrees(g)
    assert got.degrees == degrees
    assert tuple(float_degrees(g)) == degrees


@pytest.mark.parametrize("name", ["Z1", "Z7", "D16", "Q16", "S5", "PSL2_7"])
def test_dixon_agrees_with_float_oracle(name):
    g = named(name)
    assert list(ct.character_degrees(g).degrees) == float_degrees(g)


def test_degree_count_and_square_sum_catalog():
    for label, g in catalog_upto_360():
        res = ct.character_degrees(g)
        assert sum(d * d for d in res.degrees) == g.n, label
        assert res.classes == len(ct.conjugacy_classes(g)), label
        assert all(g.n % d == 0 for d in res.degrees), label


@pytest.mark.parametrize("q, expected", [(5, 3), (7, 3), (11, 5), (13, 7)])
def test_delta_psl2(q, expected):
    assert ct.delta(psl2(q)[0]) == expected
    # exact value alternates between (q - 1)/2 and (q + 1)/2
    assert expected == ((q - 1) // 2 if q % 4 == 3 else (q + 1) // 2)


@pytest.mark.slow
@pytest.mark.parametrize("q, expected", [(17, 9), (19, 9)])
def test_delta_psl2_large(q, expected):
    assert ct.delta(psl2(q)[0]) == expected


def test_delta_abelian_and_trivial():
    assert ct.delta(gr.build_cyclic(2)) == 1
    assert ct.delta(gr.build_abelian((3, 3))) == 1
    assert ct.delta(named("S3")) == 1
    with pytest.raises(ct.CharacterTableError):
        ct.delta(gr.build_cyclic(1))


def _commutator_subgroup(g):
    mul, inv = g.mul, g.inv
    # [x, y] = x y x^-1 y^-1, with x down the rows and y across
    comms = np.unique(mul[mul[mul, inv[:, None]], inv[None, :]])
    return gr.generated_subgroup(g, comms.tolist())


@pytest.mark.parametrize("name", ["S3", "D8", "Q8", "A4", "S4", "A5", "Q12", "PSL2_7", "Z6"])
def test_delta_one_iff_abelianization_nontrivial(name):
    g = named(name)
    derived = _commutator_subgroup(g)
    assert (ct.delta(g) == 1) == (derived.card < g.n)
    if derived.card < g.n:
        h, _ = gr.quotient(g, derived)
        assert h.is_abelian


def test_linear_character_count_is_abelianization_order():
    for name in ["S4", "Q8", "D10", "A4"]:
        g = named(name)
        derived = _commutator_subgroup(g)
        assert ct.character_degrees(g).degrees.count(1) == g.n // derived.card
