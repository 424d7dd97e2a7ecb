import numpy as np
import pytest

from sta.algebra import gp_batch


@pytest.fixture(scope="session", autouse=True)
def warm_product_kernel():
    """Trigger jit compilation of the product kernel for both dtypes once,
    so timing-sensitive checks measure the algorithm, not the compiler."""
    a = np.zeros((2, 16))
    gp_batch(a, a)
    gp_batch(a.astype(complex), a.astype(complex))
    yield
