from .figures import (FigureError, FigureSpec, bars_distribution, loss_trace,
                      render)

__all__ = ["FigureError", "FigureSpec", "bars_distribution", "loss_trace", "render"]
