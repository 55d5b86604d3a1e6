# factorization/presenters/base_presenter.py
import logging

from ..controllers.service_registry import ServiceRegistry
from ..exceptions import ConfigError, DimensionError, DomainError, NumericError, ShinboError
from ..serializers import resolve_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERIC = 2
EXIT_CONFIG = 3


class BasePresenter:
    """
    Base presenter class that other presenters inherit from.

    Presenters validate the experiment configuration, drive the controllers
    for one command and turn the results into report documents. Every
    handle_* method returns (response, exit_status) like an API response.
    """

    def __init__(self):
        """
        Initialize the base presenter with access to the service registry.
        """
        self.service_registry = ServiceRegistry.get_instance()

    def format_api_response(self, success, data=None, message=None, error=None, status=EXIT_OK):
        """
        Format a standard command response.

        Args:
            success (bool): Whether the operation was successful
            data (any, optional): Data to include in the response
            message (str, optional): Message to include in the response
            error (str, optional): Error message if success is False
            status (int, optional): Exit status (default: 0)

        Returns:
            tuple: (response_data, status)
        """
        response = {
            'success': success
        }

        if data is not None:
            response['data'] = data

        if message:
            response['message'] = message

        if error:
            response['error'] = error

        return response, status

    def status_for(self, error):
        """Exit status for a failure: 2 for numeric failures, 3 for invalid configuration or inputs."""
        if isinstance(error, NumericError):
            return EXIT_NUMERIC
        if isinstance(error, (ConfigError, DimensionError, DomainError)):
            return EXIT_CONFIG
        return 1

    def format_error(self, operation, error):
        logger.error(f"Error in {operation}: {error}")
        data = {'validation_errors': error.errors} if isinstance(error, ConfigError) and error.errors else None
        return self.format_api_response(False, data=data, error=str(error), status=self.status_for(error))

    def resolve(self, raw_config):
        """Validate a raw configuration mapping; raises ConfigError."""
        return resolve_config(raw_config)

    def handle(self, operation, func, *args, **kwargs):
        """
        Run `func` and convert package errors into a failed response.

        Returns:
            tuple: (response_data, status)
        """
        try:
            return func(*args, **kwargs)
        except ShinboError as e:
            return self.format_error(operation, e)
