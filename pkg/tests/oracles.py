"""Independent high-precision oracles used to freeze and cross-check values.

These re-derive everything from first principles with mpmath and plain
loops; they share no code with the package.
"""
import itertools
import math

from mpmath import log, mp, mpf, ncdf

mp.dps = 40


def entropy_bits(probs):
    return -sum(mpf(p) * log(mpf(p), 2) for p in probs if p > 0)


def joint_stats(cells):
    """(H(rows), H(cols), H(joint), H(cols | rows)) of a 2-D table."""
    cells = [[mpf(c) for c in row] for row in cells]
    rows = [sum(r) for r in cells]
    cols = [sum(col) for col in zip(*cells)]
    flat = [c for r in cells for c in r]
    h_r, h_c, h_j = entropy_bits(rows), entropy_bits(cols), entropy_bits(flat)
    return h_r, h_c, h_j, h_j - h_r


def aided_scenario(p_t, d_h, d_a, v_a=mpf(2) / 3, v_h=mpf(2) / 3, beta_a=None, beta_h_base=None):
    """Closed-form tables and responsibility, evaluated at 40 digits."""
    p_t, d_h, d_a = mpf(p_t), mpf(d_h), mpf(d_a)
    b_a = mpf(beta_a) if beta_a else (1 - p_t) / p_t * mpf(v_a)
    c_a = log(b_a) / d_a
    tp, fp = ncdf(d_a / 2 - c_a), ncdf(-d_a / 2 - c_a)
    fn, tn = ncdf(c_a - d_a / 2), ncdf(c_a + d_a / 2)
    if beta_h_base:
        v_h = mpf(beta_h_base) * p_t / (1 - p_t)
    post_alarm = p_t * tp / (p_t * tp + (1 - p_t) * fp)
    post_noise = p_t * fn / (p_t * fn + (1 - p_t) * tn)
    b_alarm = (1 - post_alarm) / post_alarm * v_h
    b_noise = (1 - post_noise) / post_noise * v_h
    c_alarm, c_noise = log(b_alarm) / d_h, log(b_noise) / d_h
    h_tp_a, h_fp_a = ncdf(d_h / 2 - c_alarm), ncdf(-d_h / 2 - c_alarm)
    h_fn_a, h_tn_a = ncdf(c_alarm - d_h / 2), ncdf(c_alarm + d_h / 2)
    h_tp_n, h_fp_n = ncdf(d_h / 2 - c_noise), ncdf(-d_h / 2 - c_noise)
    h_fn_n, h_tn_n = ncdf(c_noise - d_h / 2), ncdf(c_noise + d_h / 2)
    joint = [
        [p_t * tp * h_tp_a + (1 - p_t) * fp * h_fp_a, p_t * tp * h_fn_a + (1 - p_t) * fp * h_tn_a],
        [p_t * fn * h_tp_n + (1 - p_t) * tn * h_fp_n, p_t * fn * h_fn_n + (1 - p_t) * tn * h_tn_n],
    ]
    h_y, h_x, h_xy, h_x_given_y = joint_stats(joint)
    return {
        "auto": (tp, fp),
        "posteriors": (post_alarm, post_noise),
        "betas": (b_alarm, b_noise),
        "cutoffs": (c_alarm, c_noise),
        "joint": joint,
        "h_x": h_x,
        "h_y": h_y,
        "h_xy": h_xy,
        "resp": h_x_given_y / h_x,
    }


def brute_force_flow_resp(model_dict):
    """Resp of a JSON flow model by looping over every joint atom."""
    variables = model_dict["variables"]
    by_name = {v["name"]: v for v in variables}
    names = [v["name"] for v in variables]
    auto = [v["name"] for v in variables if v["owner"] == "automation"]
    z = model_dict["output"]
    p_az, p_a, p_z = {}, {}, {}
    for states in itertools.product(*(range(len(v["states"])) for v in variables)):
        assign = dict(zip(names, states))
        p = 1.0
        for v in variables:
            row = 0
            for par in v["parents"]:
                row = row * len(by_name[par]["states"]) + assign[par]
            p *= v["cpt"][row][assign[v["name"]]]
        a_key = tuple(assign[n] for n in auto)
        p_az[a_key, assign[z]] = p_az.get((a_key, assign[z]), 0.0) + p
        p_a[a_key] = p_a.get(a_key, 0.0) + p
        p_z[assign[z]] = p_z.get(assign[z], 0.0) + p
    h_z = -sum(p * math.log2(p) for p in p_z.values() if p > 0)
    h_z_given_a = -sum(p * math.log2(p / p_a[k[0]]) for k, p in p_az.items() if p > 0)
    return h_z_given_a / h_z
