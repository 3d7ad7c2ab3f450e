import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cascadeflow import TweetRecord


def make_record(id, parent=None, t=0, **kw):
    defaults = dict(
        root_id=None,
        author_id=f"u_{id}",
        follower_count=0,
        language="en",
        polarity=0.0,
    )
    defaults.update(kw)
    return TweetRecord(id=id, parent_id=parent, created_at=t, **defaults)


@pytest.fixture
def record_factory():
    return make_record
