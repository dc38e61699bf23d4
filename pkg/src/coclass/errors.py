"""Shared exception types."""


class BudgetError(RuntimeError):
    """A computation would exceed a configured resource budget.

    The CLI maps this to exit code 3.  ``context`` carries whatever the
    raising site knows (group order, matrix side, filtration level).
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)
