"""
One module per CLI command
"""

from schemas.config import Command

from . import analyze, bestapprox, build, reduce, sectors

# command -> (module, handler, help text)
COMMANDS = {
    Command.ANALYZE: (analyze, analyze.cmd_analyze, "Classify circuit parameters (DEA)"),
    Command.REDUCE: (reduce, reduce.cmd_reduce, "Remove an unwanted symmetry from a circuit"),
    Command.SECTORS: (sectors, sectors.cmd_sectors, "Translational sector dimension table"),
    Command.BUILD: (build, build.cmd_build, "Build and verify the omega = 1 sector circuit"),
    Command.BESTAPPROX: (bestapprox, bestapprox.cmd_bestapprox, "Best-approximation error estimate"),
}

__all__ = ["COMMANDS"]
