from .pipeline import PreprocessConfig, PreprocessPipeline, preprocess_batch, preprocess_entry

__all__ = ["PreprocessConfig", "PreprocessPipeline", "preprocess_batch", "preprocess_entry"]
