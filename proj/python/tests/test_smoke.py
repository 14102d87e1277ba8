import math

import pytest

import conefield as cf


def test_interval_arithmetic_is_outward():
    x = cf.Interval(0.1) + cf.Interval(0.2)
    assert x.lo <= 0.3 <= x.hi
    assert x.width() > 0
    assert (cf.Interval(1.0, 2.0) + cf.Interval(3.0, 4.0)) == cf.Interval(4.0, 6.0)
    s = cf.sqrt(cf.Interval(2.0))
    assert s.lo <= math.sqrt(2) <= s.hi
    assert cf.intersect(cf.Interval(0, 1), cf.Interval(2, 3)) is None


def test_compressed_form():
    x = cf.parse_compressed("0.0032[89,97]")
    assert x.lo == pytest.approx(0.003289)
    assert x.hi == pytest.approx(0.003297)
    assert cf.to_compressed(cf.Interval(-0.003226, -0.003219)).startswith("-0.0032")


def test_default_candidates():
    cands = cf.default_candidates()
    assert [c.n for c in cands] == [1, 2, 3, 4, 5, 6]
    assert cands[0].r_hat == 0.003288250
    assert cands[0].end_side == 1 and cands[1].end_side == -1


def test_prove_first_orbit():
    cfg = cf.ProofConfig()
    cand = cfg.candidates[0]
    cert = cf.prove_orbit(cand, cfg.resolved())
    assert cert.verdict == cf.Verdict.Proved, cert.reason
    assert cert.crossing_count == 1
    assert cert.return_time.lo >= 6.0
    assert cert.cover_minus.hi < -0.0015 < 0.0015 < cert.cover_plus.lo
    assert not cert.F_prime.contains_zero()
    assert len(cert.DP) == 2 and len(cert.DP[0]) == 2
    assert cf.recheck(cert, cfg.resolved()) == ""


def test_certificate_round_trip():
    cfg = cf.ProofConfig()
    cfg.candidates = [cfg.candidates[1]]
    certs = cf.prove_all(cfg.candidates, cfg.resolved())
    text = cf.serialize(cfg, certs)
    cfg2, certs2 = cf.parse_certificates(text)
    assert cf.serialize(cfg2, certs2) == text
    assert cf.recheck_all(cfg2, certs2) == []
    assert "published" in cf.report(cfg2, certs2)


def test_config_parsing():
    cfg = cf.parse_config("[integrator]\norder = 22\n")
    assert cfg.settings.order == 22
    assert cf.config_hash(cf.ProofConfig()) == 0xB422A2BA56D2BC78
    with pytest.raises(cf.ConfigError):
        cf.parse_config("[blocks]\ndb1 = x\n")


def test_scout():
    samples, extrema = cf.simulate(0.003288250, 0.0, 6.5, 1e-12)
    assert extrema == 1
    ts = [s[0] for s in samples]
    assert all(a < b for a, b in zip(ts, ts[1:]))
    c = cf.bisect_candidates(1, (0.003, 0.004))
    assert abs(c.r_hat - 0.003288250) <= 1e-6
    with pytest.raises(cf.NoSignChange):
        cf.bisect_candidates(1, (0.0031, 0.0032))
