"""Smoke test for the `epw` extension module.

Build and install first, e.g. `maturin build --release -m crates/py/Cargo.toml`
followed by `pip install target/wheels/epw-*.whl`.
"""

import json

import epw


def main():
    chern = epw.chern_report()
    assert chern["cF"] == [1, -6, 18, -34, 42, -42], chern
    assert chern["wa_class"] == 40 and chern["match"]

    a = epw.Lagrangian.sample(7, prime=101)
    assert a.prime == 101 and len(a.basis) == 10
    s = a.sextic()
    assert s.degree == 6 and s.is_homogeneous()
    assert epw.Lagrangian.from_json(a.to_json()) == a
    assert a.perp().perp() == a

    # a point of Y_A on the line x = (1, t, 0, 0, 0, 0)
    zeros = [t for t in range(101) if s.eval([1, t, 0, 0, 0, 0]) == "0"]
    for t in zeros:
        assert a.corank_at([1, t, 0, 0, 0, 0]) >= 1

    q = epw.Lagrangian.sample(0)
    assert q.prime is None
    cert = q.certificates()
    assert cert["lagrangian"] and sum(cert["corank_histogram"]) == 3906

    scan = q.reduce_mod(5).strata()
    assert scan["total"] == 3906 and scan["histogram"][3] == 0

    assert a.quadric_route_agrees()
    assert epw.Lagrangian.sample_rank7(0, prime=101).multiplicity_at_qa() == 3

    constraints, kernel_dim = epw.symplectic_uniqueness()
    assert kernel_dim == 1

    assert epw.grassmannian_count(3, 6, 3) == 33880
    assert epw.projective_count(5, 5) == 3906

    try:
        epw.Lagrangian.sample(0, prime=4)
    except epw.EpwError:
        pass
    else:
        raise AssertionError("prime 4 accepted")

    print(json.dumps({"ok": True, "sextic_terms": s.num_terms, "constraints": constraints}))


if __name__ == "__main__":
    main()
