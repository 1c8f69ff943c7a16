from .forest import ForestParams, RandomForest, predict_forest, train_forest
from .logreg import LogRegModel, LogRegParams, predict_logreg, train_logreg
from .stacking import StackingEnsemble, StackingParams, predict_stacking, train_stacking
from .svc import SvcModel, SvcParams, predict_svc, train_svc
from .tree import DecisionTree, TreeParams, predict_tree, train_tree

__all__ = [
    "DecisionTree", "TreeParams", "train_tree", "predict_tree",
    "RandomForest", "ForestParams", "train_forest", "predict_forest",
    "SvcModel", "SvcParams", "train_svc", "predict_svc",
    "LogRegModel", "LogRegParams", "train_logreg", "predict_logreg",
    "StackingEnsemble", "StackingParams", "train_stacking", "predict_stacking",
]
