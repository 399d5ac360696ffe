import inspect
import logging

LOGGER_NAME = "vwlab"

# Sub-debug level used inside hot loops (Cauchy products, lattice census).
TRACE = 5


class VWBase:
    """
    Shared logger plumbing for the agent, its checks and the command handler.

    Messages are prefixed with the calling site and, when the object names a
    check or command, with that context.
    """

    # attribute names tried, in order, for the bracketed context label
    _context_attrs = (("check_id", "Check"), ("command", "Command"))

    def __init__(self, logger_name: str = LOGGER_NAME) -> None:
        self.logger = logging.getLogger(logger_name)

    def _context_label(self) -> str:
        for attr, label in self._context_attrs:
            value = getattr(self, attr, None)
            if value:
                return f"[{label} '{value}']"
        return ""

    def _log_with_site(self, level: int, message: str) -> None:
        if not self.logger.isEnabledFor(level):
            return
        # stack[0] is this helper, stack[1] the _debug_log/_trace_log wrapper
        stack = inspect.stack()
        current_fn = stack[2].function if len(stack) > 2 else ""
        caller_fn = stack[3].function if len(stack) > 3 else ""
        caller_line = stack[3].lineno if len(stack) > 3 else 0
        context = self._context_label()
        separator = ": " if context else " "
        self.logger.log(level, f"[caller: {caller_fn}:{caller_line}][func: {current_fn}]{context}{separator}{message}")

    def _debug_log(self, message: str) -> None:
        self._log_with_site(logging.DEBUG, message)

    def _trace_log(self, message: str) -> None:
        self._log_with_site(TRACE, message)
