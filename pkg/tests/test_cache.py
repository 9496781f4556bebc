import pytest

from shiftconv.forms.cache import CacheFormatError, cache_path, read_cache, write_cache
from shiftconv.forms.eigenform import eigenform


def test_roundtrip(tmp_path):
    coeffs = [0, 1, -24, 10 ** 40, -(10 ** 40)]
    p = tmp_path / "c.bin"
    write_cache(p, 12, coeffs)
    assert read_cache(p, weight=12, prec=5) == coeffs


def test_eigenform_uses_cache(tmp_path):
    f = eigenform(16, 300, cache_dir=tmp_path)
    assert cache_path(tmp_path, 16, 300).exists()
    g = eigenform(16, 300, cache_dir=tmp_path)
    assert g.raw == f.raw


@pytest.mark.parametrize("mutate,msg", [
    (lambda b: b"XXXX" + b[4:], "magic"),
    (lambda b: b[:-3], "truncated"),
    (lambda b: b + b"\x00", "trailing"),
    (lambda b: b[:5], "header"),
])
def test_corruption(tmp_path, mutate, msg):
    p = tmp_path / "c.bin"
    write_cache(p, 12, [0, 1, -24, 252])
    p.write_bytes(mutate(p.read_bytes()))
    with pytest.raises(CacheFormatError, match=msg):
        read_cache(p)


def test_header_mismatch(tmp_path):
    p = tmp_path / "c.bin"
    write_cache(p, 12, [0, 1])
    with pytest.raises(CacheFormatError, match="weight"):
        read_cache(p, weight=16)
    with pytest.raises(CacheFormatError, match="prec"):
        read_cache(p, prec=3)
