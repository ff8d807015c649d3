"""Unit tests for the on-disk table cache."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from thetabench.algebra.field import Field
from thetabench.core.errors import CacheFormatError
from thetabench.groups.table import build_group, orthogonal_descriptor, sp_descriptor
from thetabench.runners.context import SuiteContext
from thetabench.storage.cache import (
    CACHE_ENV_VAR,
    DEFAULT_CACHE_DIR,
    TableCache,
    decode_group,
    descriptor_key,
    encode_group,
    resolve_cache_dir,
)


@pytest.fixture
def temp_cache():
    """Create a cache in a temporary directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield TableCache(Path(tmpdir))


class TestResolveCacheDir:
    """Tests for resolve_cache_dir."""

    def test_explicit_dir_wins(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """--cache-dir beats the environment."""
        monkeypatch.setenv(CACHE_ENV_VAR, "/tmp/from-env")
        assert resolve_cache_dir("/tmp/explicit") == Path("/tmp/explicit")

    def test_env_var(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """The environment variable is used when no directory is given."""
        monkeypatch.setenv(CACHE_ENV_VAR, "/tmp/from-env")
        assert resolve_cache_dir(None) == Path("/tmp/from-env")

    def test_default(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the default directory."""
        monkeypatch.delenv(CACHE_ENV_VAR, raising=False)
        assert resolve_cache_dir() == Path(DEFAULT_CACHE_DIR)


class TestGroupFiles:
    """Tests for the binary group table format."""

    def test_encode_decode(self) -> None:
        """A decoded table has the same elements and classes."""
        field = Field(3)
        desc = orthogonal_descriptor(3, 3, -1)
        table = build_group(desc, field)
        loaded = decode_group(encode_group(table), desc, field)
        assert np.array_equal(loaded.elements, table.elements)
        assert np.array_equal(loaded.class_of, table.class_of)
        assert loaded.space.eps == -1

    def test_wrong_descriptor(self) -> None:
        """A file for another group is refused."""
        field = Field(3)
        data = encode_group(build_group(sp_descriptor(1, 3), field))
        with pytest.raises(CacheFormatError):
            decode_group(data, orthogonal_descriptor(3, 3, 1), field)

    def test_truncated(self) -> None:
        """A truncated file is refused."""
        field = Field(3)
        desc = sp_descriptor(1, 3)
        data = encode_group(build_group(desc, field))
        with pytest.raises(CacheFormatError):
            decode_group(data[:-5], desc, field)

    def test_descriptor_keys(self) -> None:
        """Keys are content addresses."""
        a = descriptor_key(sp_descriptor(1, 3))
        assert a == descriptor_key(sp_descriptor(1, 3))
        assert a != descriptor_key(sp_descriptor(1, 5))
        assert descriptor_key(sp_descriptor(1, 3), "1") != descriptor_key(
            sp_descriptor(1, 3), "nonsquare"
        )


class TestTableCache:
    """Tests for TableCache."""

    def test_group_hit(self, temp_cache: TableCache) -> None:
        """The second request is served from disk."""
        field = Field(3)
        desc = sp_descriptor(1, 3)
        first = temp_cache.get_group(desc, field)
        second = temp_cache.get_group(desc, field)
        assert (temp_cache.misses, temp_cache.hits) == (1, 1)
        assert np.array_equal(first.class_of, second.class_of)
        assert temp_cache.group_path(desc).exists()

    def test_corrupt_group_is_rebuilt(self, temp_cache: TableCache) -> None:
        """A corrupt file is rebuilt, not trusted."""
        field = Field(3)
        desc = sp_descriptor(1, 3)
        path = temp_cache.group_path(desc)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"not a group table")
        table = temp_cache.get_group(desc, field)
        assert table.order == 24
        assert temp_cache.misses == 1
        assert temp_cache.hits == 0
        decode_group(path.read_bytes(), desc, field)

    def test_character_table_hit(self, temp_cache: TableCache) -> None:
        """Character tables are cached as JSON."""
        group = temp_cache.get_group(sp_descriptor(1, 3), Field(3))
        first = temp_cache.get_character_table(group)
        second = temp_cache.get_character_table(group)
        assert temp_cache.hits == 1
        assert second.degrees == first.degrees
        assert all(a == b for a, b in zip(first, second))

    def test_corrupt_character_table_is_rebuilt(self, temp_cache: TableCache) -> None:
        """Invalid JSON is rebuilt."""
        group = temp_cache.get_group(sp_descriptor(1, 3), Field(3))
        path = temp_cache.characters_path(group.descriptor)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("{")
        assert temp_cache.get_character_table(group).degrees == [1, 1, 1, 2, 2, 2, 3]

    def test_decomposition_cached_per_twist(self, temp_cache: TableCache) -> None:
        """Multiplicity matrices are keyed by the additive character."""
        for twist in ("1", "nonsquare"):
            ctx = SuiteContext(3, twist, cache=temp_cache)
            mm = ctx.decomposition(1, 0, 1)
            assert mm.total_dimension() == 3
        ctx = SuiteContext(3, "1", cache=temp_cache)
        before = temp_cache.hits
        again = ctx.decomposition(1, 0, 1)
        assert temp_cache.hits > before
        assert again.total_dimension() == 3
