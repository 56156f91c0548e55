"""Acceptance suite: one test per criterion, timed against its budget.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
PASS lines.
"""

import itertools
import json
import random
import time

from demuskin.words import (Alphabet, Word, abelianize_mod_l, commutator,
                            conjugate_in_free)
from demuskin.gog import apply_endo, compose_images, dehn_twist, fundamental_presentation
from demuskin.catalog import (DemuskinParams, SplitDescriptor, boundary_a_word,
                              build_split, curve_complex_slice, neukirch_endo,
                              nielsen_separation, relator, split_amalg,
                              split_hnn, theorem_beta, twist_images,
                              two_edge_refinement, validate_splitting,
                              whitehead_minimal, whitehead_moves)
from demuskin.pquot import (FiniteHom, OuternessCertificate, certify_outer,
                            element_order, heisenberg_case_hom,
                            hnn_cyclic_hom, paired_class2_hom,
                            verify_certificate)


def _report(number, label, elapsed, budget):
    assert elapsed < budget, f"criterion {number} took {elapsed:.2f}s >= {budget}s"
    print(f"PASS criterion {number}: {label} ({elapsed:.2f}s < {budget}s)")


def _scan_to_fixpoint(letters):
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            if letters[i] == -letters[i + 1]:
                del letters[i : i + 2]
                changed = True
                break
    return tuple(letters)


def test_criterion_1_reduction_oracle():
    start = time.monotonic()
    rank2 = Alphabet(("x", "y"))
    sigma2 = (1, -1, 2, -2)
    for n in range(0, 9):
        for seq in itertools.product(sigma2, repeat=n):
            assert Word(rank2, seq).letters == _scan_to_fixpoint(seq)
    rank4 = Alphabet(("x1", "y1", "x2", "y2"))
    sigma4 = (1, -1, 2, -2, 3, -3, 4, -4)
    rng = random.Random(20240301)
    for _ in range(10_000):
        seq = tuple(rng.choice(sigma4) for _ in range(rng.randrange(0, 41)))
        assert Word(rank4, seq).letters == _scan_to_fixpoint(seq)
    _report(1, "reduction matches scan-to-fixpoint oracle", time.monotonic() - start, 10)


def _catalog_grid():
    for d in (2, 3):
        for r in (1, 2):
            for rp in range(r, 4):
                params = DemuskinParams(3, d, r, rp)
                for n in range(1, d):
                    yield params, split_amalg(params, n)
            params = DemuskinParams(3, d, r, "inf")
            for form in ("theorem", "definition"):
                yield params, split_hnn(params, form)


def test_criterion_2_splitting_validity():
    start = time.monotonic()
    count = 0
    for params, es in _catalog_grid():
        assert validate_splitting(es, params)
        from demuskin.normal_forms import AmalgamSplitting
        if isinstance(es.splitting, AmalgamSplitting):
            lhs = (es.to_ambient(es.splitting.boundary_a)
                   * es.to_ambient(es.splitting.boundary_b).inverse())
            assert lhs == relator(params)   # letter for letter
        count += 1
    assert count == 23
    _report(2, f"{count} catalog splittings validate", time.monotonic() - start, 5)


def test_criterion_3_twists_preserve_relator():
    start = time.monotonic()
    checked = 0
    for params, es in _catalog_grid():
        w = relator(params)
        for k in (1, 2, 3):
            image = apply_endo(twist_images(es, k), w)
            assert conjugate_in_free(image, w)
            checked += 1
    # the partial-conjugation identity on the arithmetic generators is the
    # special case [x3, x4] -> [x3, x4 x3]
    psi = neukirch_endo(4)
    alpha = next(iter(psi.values())).alphabet
    lhs = apply_endo(psi, commutator(alpha.gen("x3"), alpha.gen("x4")))
    assert lhs == commutator(alpha.gen("x3"), alpha.word("x4 x3"))
    _report(3, f"{checked} twisted relators stay conjugate", time.monotonic() - start, 10)


def test_criterion_4_hyperbolicity_reproductions():
    start = time.monotonic()
    # HNN theorem pair at p=3, d=2, r=1
    params = DemuskinParams(3, 2, 1, "inf")
    alpha = split_hnn(params, "theorem")
    beta = theorem_beta(params, SplitDescriptor("hnn"))
    assert not alpha.metrics(beta.edge_word).elliptic
    for k in (1, 2):
        twisted = apply_endo(twist_images(alpha, k), beta.edge_word)
        m = beta.metrics(twisted)
        assert not m.elliptic and m.translation_length >= 1
    # amalgam theorem pair
    for rp in (1, 2):
        params = DemuskinParams(3, 2, 1, rp)
        alpha = split_amalg(params, 1)
        beta = theorem_beta(params, SplitDescriptor("amalg", 1))
        assert not alpha.metrics(beta.edge_word).elliptic
        for k in (1, 2):
            twisted = apply_endo(twist_images(alpha, k), beta.edge_word)
            m = beta.metrics(twisted)
            assert not m.elliptic and m.translation_length >= 1
    _report(4, "companion edge words are hyperbolic, before and after twisting",
            time.monotonic() - start, 5)


def test_criterion_5_torsion_order_law():
    start = time.monotonic()
    cases = set()
    grid = [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (1, "inf"), (2, "inf")]
    for r, rp in grid:
        for s in (1, 2):
            for d, n in ((2, 1), (3, 2)):
                params = DemuskinParams(3, d, r, rp)
                hom = heisenberg_case_hom(params, s, n)
                cases.add(hom.meta["case"])
                assert hom.image(relator(params)) == hom.group.identity
                edge = boundary_a_word(params, n, params.alphabet())
                assert element_order(hom.group, hom.image(edge)) == 3 ** s
    assert cases == {1, 2, 3}
    _report(5, "relator dies and edge image has order exactly p^s in all cases",
            time.monotonic() - start, 5)


def test_criterion_6_outerness_certificates(tmp_path):
    start = time.monotonic()
    jobs = [(DemuskinParams(3, 2, 1, "inf"), SplitDescriptor("hnn"), 1),
            (DemuskinParams(3, 2, 1, "inf"), SplitDescriptor("hnn"), 2),
            (DemuskinParams(3, 2, 1, 1), SplitDescriptor("amalg", 1), 1),
            (DemuskinParams(3, 2, 1, 2), SplitDescriptor("amalg", 1), 1)]
    for i, (params, desc, k) in enumerate(jobs):
        cert = certify_outer(params, desc, k)
        assert isinstance(cert, OuternessCertificate), \
            f"NotFound for {desc} k={k}: that is a failure here"
        path = tmp_path / f"cert{i}.json"
        blob = json.dumps(cert.to_json(), indent=2)
        path.write_text(blob)
        reloaded = json.loads(path.read_text())
        assert verify_certificate(reloaded)
        assert json.dumps(reloaded, indent=2) == blob
    _report(6, "4 certificates found and re-verified bit-identically from disk",
            time.monotonic() - start, 120)


def test_criterion_7_whitehead_separation():
    start = time.monotonic()
    lengths = []
    for rp in (1, 2, 3):
        report = whitehead_minimal(relator(DemuskinParams(3, 2, 1, rp)))
        assert report.minimal
        lengths.append(report.length)
    assert lengths == sorted(lengths) and len(set(lengths)) == 3
    table = nielsen_separation(DemuskinParams(3, 2, 1, 1), [1, 2, 3], [2, 5, 7, 11])
    assert all(p["verdict"] == "distinct" for p in table["pairs"])
    _report(7, f"minimal lengths {lengths} pairwise distinct",
            time.monotonic() - start, 60)


def test_criterion_8_mod_l_primitivity():
    start = time.monotonic()
    for rp in (1, 2, 3):
        w = relator(DemuskinParams(3, 2, 1, rp))
        for l in (2, 5, 7, 11):
            _, primitive = abelianize_mod_l(w, l)
            assert primitive
    _report(8, "relators primitive mod 2, 5, 7, 11", time.monotonic() - start, 1)


def test_criterion_9_twist_commutation():
    start = time.monotonic()
    params = DemuskinParams(3, 3, 2, 2)
    graph = two_edge_refinement(params, 1, 2)
    pres = fundamental_presentation(graph)
    t1 = dehn_twist(graph, {"e1": 1}, "V1", 1)
    t2 = dehn_twist(graph, {"e2": 1}, "V1", 1)
    q1 = boundary_a_word(params, 1, params.alphabet())
    quotients = 0
    for s in (1, 2):
        for n in (1, 2):
            hom = heisenberg_case_hom(params, s, n)
            assert hom.meta["case"] == 1
            images = dict(hom.images)
            images["z"] = hom.image(q1)
            ext = FiniteHom(hom.group, pres.alphabet, images, None)
            for name in pres.alphabet.names:
                w = pres.alphabet.gen(name)
                assert ext.image(apply_endo(t1, apply_endo(t2, w))) == \
                    ext.image(apply_endo(t2, apply_endo(t1, w)))
            quotients += 1
    _report(9, f"collapse-induced twists commute in {quotients} quotients",
            time.monotonic() - start, 10)


def _relator_preserving_moves(params, side_names, quotient_relator):
    amb = params.alphabet()
    out = []
    for move in whitehead_moves(amb):
        names = {amb.names[abs(l) - 1] for l in move.support}
        if not names <= side_names:
            continue
        images = move.images(amb)
        if conjugate_in_free(apply_endo(images, quotient_relator), quotient_relator):
            out.append(images)
    return out


def test_criterion_10_conjugation_formula():
    start = time.monotonic()
    rng = random.Random(0)
    checked = 0

    # amalgam splitting: transported twist built from transported boundary
    params = DemuskinParams(3, 2, 1, 1)
    amb = params.alphabet()
    w = relator(params)
    es = split_amalg(params, 1)
    side_a = set(es.splitting.alphabet_a.names)
    side_b = set(es.splitting.alphabet_b.names)
    moves = (_relator_preserving_moves(params, side_a, w)
             + _relator_preserving_moves(params, side_b, w))
    homs = [heisenberg_case_hom(params, 1, 1), paired_class2_hom(params, 1, 1)]
    identity = {n: amb.gen(n) for n in amb.names}
    k = 2
    t_map = twist_images(es, k)
    for _ in range(10):
        phi = dict(identity)
        for _ in range(rng.randrange(1, 4)):
            phi = compose_images(rng.choice(moves), phi)
        assert conjugate_in_free(apply_endo(phi, w), w)
        u_b = apply_endo(phi, es.to_ambient(es.splitting.boundary_b))
        transported = dict(identity)
        for name in side_b:
            transported[name] = u_b ** k * amb.gen(name) * u_b ** (-k)
        for hom in homs:
            for name in amb.names:
                lhs = hom.image(apply_endo(transported, apply_endo(phi, amb.gen(name))))
                rhs = hom.image(apply_endo(phi, apply_endo(t_map, amb.gen(name))))
                assert lhs == rhs
        checked += 1

    # HNN splitting: transported twist from the transported source word
    params = DemuskinParams(3, 2, 1, "inf")
    amb = params.alphabet()
    w = relator(params)
    es = split_hnn(params, "theorem")
    base_names = set(es.splitting.base.names)
    moves = _relator_preserving_moves(params, base_names, w)
    homs = [heisenberg_case_hom(params, 1, 1), hnn_cyclic_hom(params, 1)]
    identity = {n: amb.gen(n) for n in amb.names}
    t_map = twist_images(es, k)
    for _ in range(10):
        phi = dict(identity)
        for _ in range(rng.randrange(1, 4)):
            phi = compose_images(rng.choice(moves), phi)
        assert conjugate_in_free(apply_endo(phi, w), w)
        u_t = apply_endo(phi, es.to_ambient(es.splitting.source))
        transported = dict(identity)
        transported["y2"] = amb.gen("y2") * u_t ** k
        for hom in homs:
            for name in amb.names:
                lhs = hom.image(apply_endo(transported, apply_endo(phi, amb.gen(name))))
                rhs = hom.image(apply_endo(phi, apply_endo(t_map, amb.gen(name))))
                assert lhs == rhs
        checked += 1

    assert checked == 20
    _report(10, "transported twists match conjugated twists on 20 seeded maps",
            time.monotonic() - start, 30)


def test_criterion_11_curve_complex_slice():
    start = time.monotonic()
    data = curve_complex_slice(DemuskinParams(3, 2, 1, 1), 3)
    kinds = [v["kind"] for v in data["vertices"]]
    assert kinds.count("hnn") == 1
    amalgams = [(v["kind"]["amalg"], v["rprime"]) for v in data["vertices"]
                if v["kind"] != "hnn"]
    assert sorted(amalgams) == [(1, 1), (1, 2), (1, 3)]
    n = len(data["vertices"])
    assert len(data["provenance"]) == n * (n - 1) // 2
    assert all("verdict" in entry and "via" in entry
               for entry in data["provenance"])
    _report(11, "slice census: 1 HNN class + amalgam classes for r' in {1,2,3}",
            time.monotonic() - start, 30)
