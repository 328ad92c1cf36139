"""Tempered MCMC kernels and the rung runner."""

from .gibbs_linreg import (LinRegData, LinRegState, NormalGammaPrior, gibbs_linreg_step,
                           run_gibbs_linreg, tempered_conditionals)
from .metropolis_logistic import (LogisticData, LogisticState, acceptance_probability,
                                  log_acceptance_ratio, metropolis_logistic_step,
                                  proposal_variance, run_metropolis_logistic)
from .mixture import (MixturePrior, MixtureState, allocation_log_ratio, completed_log_likelihood,
                      mixture_step, run_mixture)
from .rung import ChainRun, RunConfig, RungError, batch_means_se, run_rung

__all__ = [
    "ChainRun", "RunConfig", "RungError", "batch_means_se", "run_rung",
    "LinRegData", "LinRegState", "NormalGammaPrior", "gibbs_linreg_step", "run_gibbs_linreg",
    "tempered_conditionals",
    "LogisticData", "LogisticState", "acceptance_probability", "log_acceptance_ratio",
    "metropolis_logistic_step", "proposal_variance", "run_metropolis_logistic",
    "MixturePrior", "MixtureState", "allocation_log_ratio", "completed_log_likelihood",
    "mixture_step", "run_mixture",
]
