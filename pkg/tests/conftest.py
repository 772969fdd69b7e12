import math

# Paper-derived magnitudes are one-significant-figure statements; agreement
# means a ratio within a factor of 30 either way.
ORDER_FACTOR = 30.0


def order_close(value, target, factor=ORDER_FACTOR):
    return target / factor <= value <= target * factor


def rel_err(value, reference):
    return abs(value - reference) / abs(reference)


def assert_rel(value, reference, tol, label=""):
    err = rel_err(value, reference)
    assert err <= tol, (
        f"{label or 'value'} = {value!r} vs {reference!r}: "
        f"relative error {err:.3e} > {tol:g}")


def criterion(name, condition, detail=""):
    status = "PASS" if condition else "FAIL"
    print(f"{name}: {status}" + (f"  ({detail})" if detail else ""))
    assert condition, f"{name} failed: {detail}"


def geometric_mean_ratio(a, b):
    return math.exp(abs(math.log(a / b)))
