"""ZF structure and the consistency of the SINR expressions."""
import numpy as np

from scfdma.equalize import mmse, mmse_from_variances, overall_response, zf
from scfdma.geometry import SystemGeometry
from scfdma.shaping import WindowKind
from scfdma.sinr import (
    LinkBudget,
    analytical_sinr,
    interference_power,
    lfdma_zf_sinr,
    sinr_from_noise_variance,
    useful_power,
)
from scfdma.utils.errors import SingularSubchannelError
from scfdma.validate_utils.check import Check, channel_for, windows_for

ES_N0_DB = (0.0, 10.0, 20.0, 30.0)


class ZfPropertyCheck(Check):
    """Every alias class of the ZF overall response sums to one; no interference."""

    name = "zf-property"
    tolerance = 1e-10
    trials = 50

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Worst alias-sum deviation or interference-to-useful ratio."""
        worst = 0.0
        for w in windows_for(g, rng):
            for _ in range(self.trials):
                ch = channel_for(g, rng)
                try:
                    G = zf(w, ch, g)
                except SingularSubchannelError:
                    continue
                P = overall_response(w, ch, G)
                ratio = interference_power(P) / useful_power(P)
                worst = max(worst, np.abs(P.stacked - 1.0).max(), ratio)
        return worst


class SinrConsistencyCheck(Check):
    """Both SINR forms agree, MMSE never loses to ZF, closed forms match."""

    name = "sinr-consistency"
    tolerance = 1e-12
    trials = 20

    def measure(self, g: SystemGeometry, rng: np.random.Generator) -> float:
        """Worst relative disagreement."""
        worst = 0.0
        for w in windows_for(g, rng):
            for _ in range(self.trials):
                ch = channel_for(g, rng)
                try:
                    G_zf = zf(w, ch, g)
                except SingularSubchannelError:
                    continue
                for es_n0_db in ES_N0_DB:
                    link = LinkBudget.from_es_n0(10 ** (es_n0_db / 10), w, ch, g)
                    values = {}
                    G_mmse = mmse(w, ch, g, link.es_n0)
                    for label, G in (("zf", G_zf), ("mmse", G_mmse)):
                        P = overall_response(w, ch, G)
                        es_form = analytical_sinr(P, G, w, ch, g, link)
                        variance_form = sinr_from_noise_variance(
                            P, G, g, link.sigma_x2, link.sigma_w2
                        )
                        worst = max(worst, abs(es_form - variance_form) / es_form)
                        values[label] = es_form
                    worst = max(worst, (values["zf"] - values["mmse"]) / values["zf"])

                    G_var = mmse_from_variances(w, ch, link.sigma_x2, link.sigma_w2)
                    G_es = mmse(w, ch, g, link.es_n0)
                    worst = max(
                        worst, np.abs(G_var.G - G_es.G).max() / np.abs(G_es.G).max()
                    )
                    if w.kind is WindowKind.RECTANGULAR:
                        closed = lfdma_zf_sinr(ch, g, link.es_n0, w.user_block_index)
                        worst = max(worst, abs(closed - values["zf"]) / closed)
        return worst
