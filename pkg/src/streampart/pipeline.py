"""Concurrent first pass: reader -> buffer handler -> partition worker.

The roles are connected by bounded FIFO queues, so a slow consumer blocks
its producer.  The handler marks nodes assigned-for-scoring before their
task is enqueued; the worker executes tasks in sequence order.  With CMS
scoring the worker publishes committed blocks back to the handler, which
picks them up with some lag.

The worker runs either in the calling thread (``thread`` backend) or in a
forked process (``process`` backend), the latter being the only way to get
real overlap between buffering and partitioning under the GIL.
"""

from __future__ import annotations

import multiprocessing as mp
import os
import queue
import threading

from .engine import BufferHandler, EngineConfig, ParsedLine, PartitionTask, PartitionWorker
from .graph import StreamGraph, load_metis, stream_nodes
from .state import PartitionState

__all__ = ["ParsedLine", "PartitionTask", "PipelineError", "run_parallel"]

_END = None
_POLL = 0.05


class PipelineError(RuntimeError):
    """A pipeline role failed; the original exception is chained."""


class _Stopped(Exception):
    pass


class _Control:
    def __init__(self):
        self.stop = threading.Event()
        self.error: BaseException | None = None
        self._lock = threading.Lock()

    def fail(self, exc: BaseException) -> None:
        with self._lock:
            if self.error is None:
                self.error = exc
        self.stop.set()

    def put(self, q, item) -> None:
        while True:
            if self.stop.is_set():
                raise _Stopped
            try:
                q.put(item, timeout=_POLL)
                return
            except queue.Full:
                pass

    def get(self, q):
        while True:
            if self.stop.is_set():
                raise _Stopped
            try:
                return q.get(timeout=_POLL)
            except queue.Empty:
                pass


def _resolve_backend(backend: str) -> str:
    if backend == "auto":
        multi = (os.cpu_count() or 1) >= 2 and "fork" in mp.get_all_start_methods()
        return "process" if multi else "thread"
    if backend not in ("thread", "process"):
        raise ValueError(f"unknown backend {backend!r}")
    return backend


def _process_worker(g, cfg, task_q, result_q, publish: bool) -> None:
    worker = PartitionWorker(g, cfg)
    try:
        while True:
            task = task_q.get()
            if task is _END:
                break
            commits = worker.execute(task)
            if publish:
                result_q.put(("commits", commits))
        st = worker.state
        result_q.put(("done", st.block, st.block_weight, st.forced, worker.records))
    except BaseException as exc:  # surfaced by the parent
        result_q.put(("error", exc))


def run_parallel(
    source,
    order,
    cfg: EngineConfig,
    input_capacity: int = 4096,
    task_capacity: int = 8,
    backend: str = "auto",
):
    """First pass with the three roles running concurrently.

    ``source`` is a ``StreamGraph`` or a METIS path.  Returns
    ``(state, batch_records, handler_stats)`` like ``run_pass_one``.
    """
    if input_capacity < 1 or task_capacity < 1:
        raise ValueError("queue capacities must be >= 1")
    g = source if isinstance(source, StreamGraph) else load_metis(source)
    if len(order) != g.n:
        raise ValueError(f"order covers {len(order)} nodes, graph has {g.n}")
    backend = _resolve_backend(backend)
    ctl = _Control()
    feedback: queue.SimpleQueue = queue.SimpleQueue()
    input_q: queue.Queue = queue.Queue(maxsize=input_capacity)
    if backend == "process":
        ctx = mp.get_context("fork")
        task_q = ctx.Queue(maxsize=task_capacity)
        result_q = ctx.Queue()
    else:
        task_q = queue.Queue(maxsize=task_capacity)
    handler = BufferHandler(g.n, cfg, lambda task: ctl.put(task_q, task))

    def reader():
        try:
            for v, nbrs, ws in stream_nodes(g, order):
                ctl.put(input_q, ParsedLine(v, nbrs, ws))
            ctl.put(input_q, _END)
        except _Stopped:
            pass
        except BaseException as exc:
            ctl.fail(exc)

    def handle():
        try:
            while True:
                while True:
                    try:
                        handler.apply_commits(feedback.get_nowait())
                    except queue.Empty:
                        break
                line = ctl.get(input_q)
                if line is _END:
                    break
                handler.push(line.node, line.neighbors, line.weights)
            handler.finish()
            ctl.put(task_q, _END)
        except _Stopped:
            pass
        except BaseException as exc:
            ctl.fail(exc)

    threads = [threading.Thread(target=reader, name="reader", daemon=True),
               threading.Thread(target=handle, name="buffer-handler", daemon=True)]
    publish = handler.cms
    state = None
    records = []
    proc = None
    if backend == "process":
        # fork before any helper thread exists
        proc = ctx.Process(target=_process_worker, args=(g, cfg, task_q, result_q, publish), daemon=True)
        proc.start()
    for t in threads:
        t.start()
    try:
        if proc is not None:
            while state is None:
                try:
                    msg = result_q.get(timeout=_POLL)
                except queue.Empty:
                    if ctl.stop.is_set():
                        raise _Stopped
                    if not proc.is_alive() and result_q.empty():
                        raise PipelineError(f"partition worker exited with code {proc.exitcode}")
                    continue
                if msg[0] == "commits":
                    feedback.put(msg[1])
                elif msg[0] == "error":
                    raise msg[1]
                else:
                    _, block, block_weight, forced, records = msg
                    state = PartitionState.for_graph(g, cfg.k, cfg.epsilon)
                    state.block, state.block_weight, state.forced = block, block_weight, forced
        else:
            worker = PartitionWorker(g, cfg)
            while True:
                task = ctl.get(task_q)
                if task is _END:
                    break
                commits = worker.execute(task)
                if publish:
                    feedback.put(commits)
            state, records = worker.state, worker.records
    except _Stopped:
        pass
    except BaseException as exc:
        ctl.fail(exc)
    finally:
        if ctl.error is not None:
            ctl.stop.set()
        for t in threads:
            t.join()
        if proc is not None:
            if ctl.error is not None and proc.is_alive():
                proc.terminate()
            proc.join()
    if ctl.error is not None:
        raise PipelineError(f"pipeline failed: {ctl.error!r}") from ctl.error
    return state, records, handler.stats
