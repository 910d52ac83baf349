"""Text formats: round trips against the shipped fixtures and error paths."""

from fractions import Fraction

import pytest

from monosync.coupling import InfeasibilityCertificate
from monosync.errors import InvalidMeasure, ParseError
from monosync.formats import (
    parse_certificate,
    parse_coupling,
    parse_kernel,
    parse_measures,
    parse_phi,
    parse_poset,
    parse_system,
    serialize_certificate,
    serialize_coupling,
    serialize_kernel,
    serialize_measures,
    serialize_phi,
    serialize_poset,
    serialize_system,
)
from monosync.poset import covers
from monosync.synchronize import CellPermutation

from conftest import PHI2_15, SHOWCASE_ATOMS, W6_COVERS


def test_poset_roundtrip(data_dir, w6, tmp_path):
    assert covers(w6) == W6_COVERS
    out = tmp_path / "again.poset"
    out.write_text(serialize_poset(w6))
    again = parse_poset(out)
    assert again.elements == w6.elements and covers(again) == W6_COVERS


def test_measures_roundtrip(data_dir, w6, p1, p2, psi, tmp_path):
    parsed = parse_measures(data_dir / "w6.measures", w6)
    assert set(parsed) == {"p1", "p2"}
    assert parsed["p1"] == p1 and parsed["p2"] == p2
    out = tmp_path / "again.measures"
    out.write_text(serialize_measures(parsed, order=psi.order))
    assert parse_measures(out, w6) == parsed
    # canonical form drops zero masses
    assert "mass" not in [
        ln for ln in serialize_measures(parsed).splitlines()
        if ln.endswith(" 0/1")]


def test_system_fixture(data_dir, w6, p1, p2):
    system = parse_system(data_dir / "w6.system")
    assert system.index_poset.elements == ("1", "2")
    assert system.state_poset.elements == w6.elements
    assert system.measure_of("1") == p1 and system.measure_of("2") == p2


def test_system_serialize_parse(tmp_path, w6, p1, p2):
    (tmp_path / "s.poset").write_text(serialize_poset(w6))
    (tmp_path / "i.poset").write_text("element a\nelement b\ncover a b\n")
    (tmp_path / "m.measures").write_text(
        serialize_measures({"lo": p1, "hi": p2}))
    (tmp_path / "sys.system").write_text(serialize_system(
        "i.poset", "s.poset", ["m.measures"], {"a": "lo", "b": "hi"}))
    system = parse_system(tmp_path / "sys.system")
    assert system.measure_of("a") == p1 and system.measure_of("b") == p2


def test_kernel_fixture(data_dir, chain2_kernel, tmp_path):
    kern = parse_kernel(data_dir / "chain2.kernel")
    assert kern.state_poset.elements == ("lo", "hi")
    for x in ("lo", "hi"):
        assert kern.row(x) == chain2_kernel.row(x)
    (tmp_path / "chain2.poset").write_text(serialize_poset(kern.state_poset))
    (tmp_path / "rows.measures").write_text(
        serialize_measures({x: kern.row(x) for x in ("lo", "hi")}))
    (tmp_path / "k.kernel").write_text(serialize_kernel(
        "chain2.poset", ["rows.measures"], {"lo": "lo", "hi": "hi"}))
    again = parse_kernel(tmp_path / "k.kernel")
    assert all(again.row(x) == kern.row(x) for x in ("lo", "hi"))


def test_coupling_roundtrip(showcase_coupling, tmp_path):
    out = tmp_path / "pi.coupling"
    out.write_text(serialize_coupling(showcase_coupling))
    again = parse_coupling(out, ("1", "2"))
    assert again.atoms == dict(SHOWCASE_ATOMS)
    with pytest.raises(ParseError, match="expected 3"):
        parse_coupling(out, ("1", "2", "3"))


def test_phi_roundtrip(tmp_path):
    phi = CellPermutation(15, PHI2_15)
    out = tmp_path / "phi.phi"
    out.write_text(serialize_phi(phi))
    assert parse_phi(out) == phi


def test_certificate_fixture(data_dir, tmp_path):
    cert = parse_certificate(data_dir / "diamond_infeasible.cert")
    assert cert.gap == Fraction(2, 5)
    out = tmp_path / "again.cert"
    out.write_text(serialize_certificate(cert))
    assert parse_certificate(out) == cert
    assert isinstance(cert, InfeasibilityCertificate)


def test_comments_and_blank_lines(tmp_path):
    out = tmp_path / "c.poset"
    out.write_text("# header\n\nelement a  # trailing\nelement b\n\ncover a b\n")
    poset = parse_poset(out)
    assert poset.elements == ("a", "b") and poset.leq("a", "b")


def test_parse_errors(tmp_path, w6):
    missing = parse_poset
    with pytest.raises(ParseError) as err:
        missing(tmp_path / "nope.poset")
    assert err.value.lineno == 0

    bad = tmp_path / "bad.poset"
    bad.write_text("vertex a\n")
    with pytest.raises(ParseError, match="unknown directive"):
        parse_poset(bad)
    bad.write_text("element a\ncover a\n")
    with pytest.raises(ParseError, match="takes 2"):
        parse_poset(bad)

    m = tmp_path / "bad.measures"
    m.write_text("mass x 1/2\n")
    with pytest.raises(ParseError, match="before any measure"):
        parse_measures(m, w6)
    m.write_text("measure p\nmass x 1/0\n")
    with pytest.raises(ParseError, match="bad rational"):
        parse_measures(m, w6)
    m.write_text("measure p\nmass x 1/2\nmass x 1/2\n")
    with pytest.raises(ParseError, match="duplicate mass"):
        parse_measures(m, w6)
    m.write_text("measure p\nmass x 1/2\nmeasure p\n")
    with pytest.raises(ParseError, match="duplicate measure label"):
        parse_measures(m, w6)
    m.write_text("measure p\nmass x 1/2\n")
    with pytest.raises(InvalidMeasure):
        parse_measures(m, w6)

    c = tmp_path / "bad.coupling"
    c.write_text("atom x,x 1/2\n")
    with pytest.raises(ParseError, match="sum to 1/2"):
        parse_coupling(c, ("1", "2"))
    c.write_text("atom x,x 1/2\natom x,x 1/2\n")
    with pytest.raises(ParseError, match="duplicate atom"):
        parse_coupling(c, ("1", "2"))

    f = tmp_path / "bad.phi"
    f.write_text("cells 2\nmap 0 0\n")
    with pytest.raises(ParseError, match="every cell"):
        parse_phi(f)
    f.write_text("map 0 0\nmap 1 1\n")
    with pytest.raises(ParseError, match="missing cells"):
        parse_phi(f)
    f.write_text("cells 0\n")
    with pytest.raises(ParseError, match="bad grid size"):
        parse_phi(f)

    g = tmp_path / "bad.cert"
    g.write_text("dual a x 1/2\n")
    with pytest.raises(ParseError, match="missing gap"):
        parse_certificate(g)

    s = tmp_path / "bad.system"
    s.write_text("states nope.poset\nmeasures nope.measures\nassign a p\n")
    with pytest.raises(ParseError, match="missing index"):
        parse_system(s)
