"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: bad shapes, unknown names, out-of-range rates."""


class DataFormatError(IOError):
    """A data file (IDX, DMFD, CSV) is malformed or truncated."""


class DivergenceError(RuntimeError):
    """A training update produced a non-finite parameter.

    Updates are never clipped or repaired silently; the offending parameter
    block and, when raised from a training loop, the epoch and sample index
    are attached for diagnosis.
    """

    def __init__(self, block, epoch=None, sample=None):
        self.block = block
        self.epoch = epoch
        self.sample = sample
        super().__init__(self._message())

    def _message(self):
        where = f"parameter block '{self.block}'"
        if self.epoch is not None:
            where += f" at epoch {self.epoch}"
        if self.sample is not None:
            where += f", sample {self.sample}"
        return f"non-finite update in {where}; reduce the learning rate"

    def with_context(self, epoch, sample):
        return DivergenceError(self.block, epoch=epoch, sample=sample)
