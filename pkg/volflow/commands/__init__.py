from volflow.commands import compare, fig8, rate, verify, veronese

# Subcomandos na ordem em que aparecem no --help
COMMANDS = {
    "verify": verify,
    "rate": rate,
    "fig8": fig8,
    "compare": compare,
    "veronese": veronese,
}
