class PipelineError(Exception):
    pass


class ParameterError(PipelineError, ValueError):
    pass


class DegenerateHistogramError(ParameterError):
    pass


class EmptyMaskError(PipelineError):
    pass


class SegmentationError(PipelineError):
    pass


class DegenerateRangeError(PipelineError):
    pass


class NoBoundaryError(PipelineError):
    pass


class DeformationOutOfBoundsError(PipelineError):
    pass


class ParseError(PipelineError, ValueError):
    def __init__(self, path, row, message):
        self.path = str(path)
        self.row = row
        super().__init__(f"{self.path}:{row}: {message}")


class StateError(PipelineError):
    pass


class ContractError(PipelineError):
    pass
