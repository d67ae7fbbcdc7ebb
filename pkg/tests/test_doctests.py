import doctest
import importlib

import pytest

MODULES = ["series", "motzkin", "equilibrium", "asymptotics", "genus", "oracle", "numeric"]


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    module = importlib.import_module(f"todamaps.{name}")
    result = doctest.testmod(module, optionflags=doctest.ELLIPSIS)
    assert result.failed == 0
