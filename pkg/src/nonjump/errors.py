class BudgetExceededError(RuntimeError):
    """An exhaustive computation would exceed its configured budget.

    ``required`` is the amount of work the computation needs (or a lower
    bound on it, when enumeration stopped early) and ``budget`` the limit.
    """

    def __init__(self, message, required=None, budget=None):
        detail = f" (required {required}, budget {budget})" if required is not None else ""
        super().__init__(message + detail)
        self.required = required
        self.budget = budget
