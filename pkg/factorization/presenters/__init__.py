# factorization/presenters/__init__.py
from .presenter_registry import PresenterRegistry
from .base_presenter import BasePresenter
from .dataset_presenter import DatasetPresenter
from .report_presenter import ReportPresenter
from .run_presenter import RunPresenter
from .signal_presenter import SignalPresenter

get_registry = PresenterRegistry.get_instance

__all__ = [
    'BasePresenter',
    'DatasetPresenter',
    'PresenterRegistry',
    'ReportPresenter',
    'RunPresenter',
    'SignalPresenter',
    'get_registry',
]
