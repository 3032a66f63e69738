import asyncio
import csv
import datetime
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from cdislogging import get_logger

from agreetest.config import config
from agreetest.sets import derive_stream

logger = get_logger(__name__)

CSV_COLUMNS = [
    "rate",
    "n",
    "k",
    "t",
    "d",
    "epsilon_hat",
    "epsilon_ci",
    "decode_disagreement",
    "disagreement_ci",
    "seed",
]


class SweepJob(object):
    def __init__(
        self, experiment, run_trial, workers=None, buffer_size=None, logger=logger
    ):
        """
        args:
            experiment: ExperimentConfig holding the sweep block
            run_trial: callable (experiment, rate, n, trial, trial_seed) -> CSV row
            workers: number of trials run at once, SWEEP_WORKERS by default
            buffer_size: max size of the trial queue
        """
        self.experiment = experiment
        self.run_trial = run_trial
        self.workers = workers or config["SWEEP_WORKERS"]
        self.buffer_size = buffer_size or 2 * self.workers
        self.logger = logger

    def trials(self):
        """
        Every (index, rate, n, trial, trial_seed) of the sweep in output
        order: rate, then n, then trial number.
        """
        exp = self.experiment
        sweep = exp.sweep
        out = []
        for rate_index, rate in enumerate(sweep.get("rates") or []):
            for n in sweep.get("n_values") or [exp.params.n]:
                for trial in range(sweep["trials"]):
                    stream = derive_stream(exp.seed, "sweep", rate_index, n, trial)
                    trial_seed = int(stream.integers(0, 2 ** 31 - 1))
                    out.append((len(out), float(rate), int(n), trial, trial_seed))
        return out

    def run(self, stream=None):
        """
        Run the sweep and write one CSV row per trial to `stream` (the
        experiment output_path, or stdout).

        Return:
            list: the rows, in output order
        """
        if stream is not None:
            return asyncio.run(self.run_sweep(stream))
        path = self.experiment.output_path
        if path:
            with open(path, "w", newline="") as f:
                rows = asyncio.run(self.run_sweep(f))
            self.logger.info("wrote {}".format(path))
            return rows
        return asyncio.run(self.run_sweep(sys.stdout))

    async def run_sweep(self, stream):
        """
        Producer-consumer workflow.

        Producer: feeds the trials to the workers
        Worker: runs one trial in the thread pool and hands the row to the writer
        Writer: the only task touching the CSV, writes rows in trial order
        """
        start_time = time.time()
        trials = self.trials()
        self.logger.info("Initializing sweep . . .")
        self.logger.info("Total number of trials: {}".format(len(trials)))
        self.logger.info("Total number of workers: {}".format(self.workers))
        self.logger.info("Total buffer size: {}".format(self.buffer_size))

        queue = asyncio.Queue(maxsize=self.buffer_size)
        results = asyncio.Queue()
        loop = asyncio.get_event_loop()
        executor = ThreadPoolExecutor(max_workers=self.workers)
        rows = []

        producer = loop.create_task(self.producer(queue, trials))
        workers = [
            loop.create_task(self.worker(j, queue, results, executor))
            for j in range(self.workers)
        ]
        writer = loop.create_task(self.writer(results, len(trials), stream, rows))
        try:
            await asyncio.gather(producer, *workers)
            await writer
        except Exception:
            writer.cancel()
            for w in workers:
                w.cancel()
            raise
        finally:
            executor.shutdown(wait=False)

        self.logger.info(
            "Sweep completed in {}".format(
                datetime.timedelta(seconds=time.time() - start_time)
            )
        )
        return rows

    async def producer(self, queue, trials):
        for trial in trials:
            await queue.put(trial)
        for _ in range(self.workers):
            await queue.put(None)

    async def worker(self, name, queue, results, executor):
        loop = asyncio.get_event_loop()
        while True:
            item = await queue.get()
            if item is None:
                queue.task_done()
                break
            index, rate, n, trial, trial_seed = item
            self.logger.debug(
                "Worker {} running rate={} n={} trial={}".format(name, rate, n, trial)
            )
            row = await loop.run_in_executor(
                executor, self.run_trial, self.experiment, rate, n, trial, trial_seed
            )
            await results.put((index, row))
            queue.task_done()

    async def writer(self, results, total, stream, rows):
        csv_writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS)
        csv_writer.writeheader()
        stream.flush()
        pending = {}
        while len(rows) < total:
            index, row = await results.get()
            pending[index] = row
            while len(rows) in pending:
                row = pending.pop(len(rows))
                csv_writer.writerow(row)
                stream.flush()
                rows.append(row)
                self.logger.info(
                    "Trial {}/{} done: rate={} n={} epsilon_hat={:.4f} "
                    "decode_disagreement={:.4f}".format(
                        len(rows),
                        total,
                        row["rate"],
                        row["n"],
                        row["epsilon_hat"],
                        row["decode_disagreement"],
                    )
                )
            results.task_done()
