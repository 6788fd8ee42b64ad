from click import ParamType


class Tolerance(ParamType):
    name = "tolerance"

    def convert(self, value, param, ctx):
        try:
            tolerance = float(value)
        except (TypeError, ValueError):
            self.fail(f"'{value}' is not a number", param, ctx)
        if tolerance <= 0:
            self.fail(f"the tolerance must be positive, got {value}", param, ctx)
        return tolerance
