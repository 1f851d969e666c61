from .all_pipelines import COMMANDS, run_session

__all__ = ["COMMANDS", "run_session"]
