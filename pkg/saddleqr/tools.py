import multiprocessing as mp
from contextlib import contextmanager

from tqdm import tqdm


class WorkerBase:
    """Process pool and per-process progress bar positions.

    ``processes == 0`` runs everything in the calling process; progress bars
    then all sit at position 0.
    """
    def __init__(self, processes=0, progress=True):
        if processes < 0:
            raise ValueError(f'processes must be >= 0, got {processes}')
        self.positions = None
        self.processes = processes
        self.progress = progress

    @contextmanager
    def positioned(self):
        if self.processes > 0:
            with mp.Manager() as manager:
                self.positions = manager.Queue()
                for p in range(1, self.processes+1):
                    self.positions.put(p)
                try:
                    yield
                finally:
                    self.positions = None
        else:
            yield

    @contextmanager
    def position(self):
        if self.positions:
            position = self.positions.get()
            try:
                yield position
            finally:
                self.positions.put(position)
        else:
            yield 0

    def tqdm(self, iterable, desc, position, length=None):
        if length is None:
            length = len(iterable)
        return tqdm(
            iterable,
            desc=f'{"├" if position < self.processes else "└"} {desc}',
            total=length,
            smoothing=0,
            position=position,
            leave=position == 0,
            disable=not self.progress,
        )

    def pool(self):
        write_lock = mp.Lock()
        tqdm.set_lock(write_lock)
        return mp.Pool(
            self.processes,
            initializer=tqdm.set_lock,
            initargs=(write_lock,),
            maxtasksperchild=1,
        )

    def map(self, fun, items):
        """Yield ``fun(item)`` in input order, in a pool when processes > 0."""
        if self.processes > 0:
            with self.pool() as pool:
                yield from pool.imap(fun, items)
        else:
            yield from map(fun, items)
