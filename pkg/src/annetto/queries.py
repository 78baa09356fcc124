"""Reference queries over the example knowledge bases, plus a description-faithful variant of the first.

The first listing counts steps with ``HAVING (?steps > 2)`` and has no
score filter, although its description asks for scores above 0.7 in a
classification task. ``Q1_PROSE`` encodes the description instead: the
score filter, and no step-count constraint.
"""

Q1 = """\
select ?configuration ?evaluation_score where { 
    ?configuration a :ANNConfiguration.
    ?configuration :hasTrainingStrategy ?tstrategy;
                   :hasNetwork ?n.
    ?n :hasTaskType ?type.
    ?type a :Classification.
    ?evaluation a :NetworkEvaluation;
        :evaluatesNetwork ?n;
        :eval_score ?evaluation_score. {
        select ?tstrategy (count(?step) as ?steps) where {
            ?tstrategy :hasTrainingSession ?tsession.
            ?tsession :hasTrainingStep ?step
        } GROUP BY ?tstrategy HAVING (?steps > 2)
    } 
}
"""

Q2 = """\
select distinct ?c where {
    ?c a :ANNConfiguration;
       :hasNetwork ?n. {
        select ?n (count(?hl) as ?layers) where { 
        ?n :hasLayer ?l;
        :hasLayer ?hl.
        ?hl a :HiddenLayer.
        ?l a :ConcatLayer. 
        } GROUP BY ?n HAVING (?layers > 3)
    }
}
"""

Q3 = """\
select distinct ?n where { 
    ?n a :Network;
         :hasLayer ?l.
    ?l a :SeparationLayer. 

    ?l :nextLayer ?left;
       :nextLayer ?right.

    FILTER (?left != ?right)

    ?left :nextLayer+ ?c.
    ?right :nextLayer+ ?c.

    ?c a :ConcatLayer.
    ?c :previousLayer ?cpl.
    ?c :previousLayer ?cpr.

    ?cpl :hasActivationFunction ?fcpl.
    ?fcpl a :Relu.

    ?cpr :hasActivationFunction ?fcpr.
    ?fcpr a :Relu.    
}
"""

Q4 = """\
select ?configuration ?evaluation_score where { 
    ?configuration a :ANNConfiguration.
    ?configuration   :hasTrainingStrategy ?tstrategy;
                     :hasNetwork ?n.
    ?n :hasTaskType ?type.
    ?type a :Clustering.
    ?evaluation a :NetworkEvaluation;
                  :evaluatesNetwork ?n;
                  :eval_score ?evaluation_score. {
        select ?tstrategy (count(?step) as ?steps) where {
               ?tstrategy :hasTrainingSession ?tsession.
               ?tsession :hasTrainingStep ?step
        } GROUP BY ?tstrategy HAVING (?steps > 2)
    }     
}
"""

Q1_PROSE = """\
select ?configuration ?evaluation_score where {
    ?configuration a :ANNConfiguration.
    ?configuration :hasTrainingStrategy ?tstrategy;
                   :hasNetwork ?n.
    ?n :hasTaskType ?type.
    ?type a :Classification.
    ?evaluation a :NetworkEvaluation;
        :evaluatesNetwork ?n;
        :eval_score ?evaluation_score.
    FILTER (?evaluation_score > 0.7)
}
"""

QUERY_FILES = {
    "q1.rq": Q1,
    "q2.rq": Q2,
    "q3.rq": Q3,
    "q4.rq": Q4,
    "q1_prose.rq": Q1_PROSE,
}
