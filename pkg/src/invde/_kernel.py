"""Compiled daily inventory loop.

Products are independent, so each replication runs product by product with a
day loop inside.  The batch entry point fans out over (candidate, replication)
cells with ``prange``; each cell writes only its own output slots, so results
do not depend on the thread count.
"""

import os

import numba as nb
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the TBB probe, which warns on older system TBB builds
    nb.config.THREADING_LAYER = "omp"

BREAKDOWN = 0
PAPER_LOOP = 1

# cost component columns
PURCHASE, ORDER, HOLDING, STOCKOUT = 0, 1, 2, 3


@nb.njit(cache=True, nogil=True)
def run_replication(demand, x0, reorder, qty, lead, pc, oc, hc, cost_model, immediate,
                    crossdock, cost, sold_out, xdock_out, orders_out, purchased_out,
                    trace, want_trace):
    """Simulate one replication in place.

    demand (P, T) int64; x0, qty, lead (P,) int64; reorder, pc, oc, hc (P,) float64.
    cost (4,) accumulates purchase/order/holding/stockout; the *_out arrays are (P,).
    trace (T, P, 7) receives on_hand, on_order, demand, sold, ordered, cost, arrived
    when want_trace is set.  Returns total end-of-day on-hand summed over days.
    """
    n_prod, horizon = demand.shape
    inv_level = 0.0
    max_lead = 0
    for i in range(n_prod):
        if lead[i] > max_lead:
            max_lead = lead[i]
    pipeline = np.zeros(horizon + max_lead + 1, dtype=np.int64)
    for i in range(n_prod):
        pipeline[:] = 0
        on_hand = x0[i]
        on_order = 0
        L = lead[i]
        V = hc[i]
        r_i = reorder[i]
        q_i = qty[i]
        c_order = oc[i]
        c_purchase = pc[i] * q_i
        half_v = V / 2.0
        sold_tot = 0
        xdock_tot = 0
        n_orders = 0
        held = 0
        short_units = 0
        loop_short = 0.0
        loop_held = 0.0
        for t in range(horizon):
            ordered = 0
            arrived = 0
            # 1. reorder on inventory position
            if q_i > 0 and on_hand + on_order < r_i:
                ordered = q_i
                n_orders += 1
                if immediate:
                    arrived = q_i
                else:
                    pipeline[t + L] += q_i
                    on_order += q_i
            # 2. receive
            if not immediate:
                due = pipeline[t]
                arrived += due
                on_order -= due
            # 3. demand
            d = demand[i, t]
            if crossdock:
                from_stock = min(d, max(on_hand, 0))
                direct = min(d - from_stock, arrived)
                sold = from_stock + direct
                on_hand = on_hand - sold + arrived
                xdock_tot += direct
            else:
                on_hand += arrived
                sold = min(d, max(on_hand, 0))
                on_hand -= sold
            sold_tot += sold
            # 4. charges
            day_cost = 0.0
            if cost_model == BREAKDOWN:
                held += on_hand
                short_units += d - sold
                if want_trace:
                    day_cost = V * (on_hand + d - sold)
            else:
                # loop variant: stock falls by the full demand, clamp + flat half charge
                on_hand = on_hand + sold - d
                if on_hand < 0:
                    on_hand = 0
                    loop_short += half_v
                    day_cost += half_v
                if (t + 1) % L == 0:
                    on_hand -= d
                    if on_hand > 0:
                        loop_held += V * on_hand
                        day_cost += V * on_hand
            level = on_hand if on_hand > 0 else 0
            inv_level += level
            if want_trace:
                if ordered > 0:
                    day_cost += c_order + c_purchase
                trace[t, i, 0] = level
                trace[t, i, 1] = on_order
                trace[t, i, 2] = d
                trace[t, i, 3] = sold
                trace[t, i, 4] = ordered
                trace[t, i, 5] = day_cost
                trace[t, i, 6] = arrived
        cost[ORDER] += n_orders * c_order
        cost[PURCHASE] += n_orders * c_purchase
        if cost_model == BREAKDOWN:
            cost[HOLDING] += V * held
            cost[STOCKOUT] += V * short_units
        else:
            cost[HOLDING] += loop_held
            cost[STOCKOUT] += loop_short
        sold_out[i] = sold_tot
        xdock_out[i] = xdock_tot
        orders_out[i] = n_orders
        purchased_out[i] = n_orders * q_i
    return inv_level


@nb.njit(cache=True, nogil=True)
def run_replication_fast(demand, x0, reorder, qty, lead, pc, oc, hc, cost, sold_out, orders_out):
    """Breakdown costs, pipeline arrivals, continuous review, no trace.

    Same results as ``run_replication`` for that configuration with fewer
    branches in the day loop; the optimizers spend nearly all their time here.
    """
    n_prod, horizon = demand.shape
    max_lead = 0
    for i in range(n_prod):
        if lead[i] > max_lead:
            max_lead = lead[i]
    pipeline = np.zeros(horizon + max_lead + 1, dtype=np.int64)
    inv_level = 0.0
    for i in range(n_prod):
        pipeline[:] = 0
        on_hand = x0[i]
        on_order = 0
        L = lead[i]
        q_i = qty[i]
        r_i = reorder[i]
        held = 0
        short = 0
        n_orders = 0
        for t in range(horizon):
            if q_i > 0 and on_hand + on_order < r_i:
                n_orders += 1
                pipeline[t + L] += q_i
                on_order += q_i
            due = pipeline[t]
            on_order -= due
            on_hand += due
            d = demand[i, t]
            if d < on_hand:
                on_hand -= d
            else:
                short += d - on_hand
                on_hand = 0
            held += on_hand
        cost[ORDER] += n_orders * oc[i]
        cost[PURCHASE] += n_orders * (pc[i] * q_i)
        cost[HOLDING] += hc[i] * held
        cost[STOCKOUT] += hc[i] * short
        sold_out[i] = demand[i].sum() - short
        orders_out[i] = n_orders
        inv_level += held
    return inv_level


@nb.njit(cache=True, parallel=True)
def run_batch(demand, x0, reorder, qty, lead, pc, oc, hc, cost_model, immediate, crossdock):
    """All candidates x all replications.

    demand (R, P, T); x0, qty (N, P).  Returns costs (N, R, 4), inventory
    (N, R), sold (N, R, P), orders (N, R, P).
    """
    n_rep, n_prod, horizon = demand.shape
    n_cand = x0.shape[0]
    costs = np.zeros((n_cand, n_rep, 4))
    inv = np.zeros((n_cand, n_rep))
    sold = np.zeros((n_cand, n_rep, n_prod), dtype=np.int64)
    orders = np.zeros((n_cand, n_rep, n_prod), dtype=np.int64)
    dummy_trace = np.zeros((0, 0, 7))
    fast = cost_model == BREAKDOWN and not immediate and not crossdock
    for cell in nb.prange(n_cand * n_rep):
        k = cell // n_rep
        r = cell % n_rep
        if fast:
            inv[k, r] = run_replication_fast(demand[r], x0[k], reorder, qty[k], lead, pc, oc, hc,
                                             costs[k, r], sold[k, r], orders[k, r])
            continue
        xdock = np.zeros(n_prod, dtype=np.int64)
        bought = np.zeros(n_prod, dtype=np.int64)
        inv[k, r] = run_replication(
            demand[r], x0[k], reorder, qty[k], lead, pc, oc, hc, cost_model, immediate,
            crossdock, costs[k, r], sold[k, r], xdock, orders[k, r], bought,
            dummy_trace, False,
        )
    return costs, inv, sold, orders
