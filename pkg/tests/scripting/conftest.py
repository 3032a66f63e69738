import os

import pytest


@pytest.fixture
def hypergraph_file(tmpdir):
    def _hypergraph_file(text, name="h.txt"):
        path = os.path.join(str(tmpdir), name)
        with open(path, "w") as f:
            f.write(text)
        return path

    return _hypergraph_file
